#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvedyn/dynamics.hpp"
#include "curvedyn/systems.hpp"

namespace curvedyn::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::uint64_t kDefaultSeed = 20240611;

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // audit residual above threshold, orbit not closed
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

struct IntegratorConfig {
  std::string method = "rk45_adaptive";
  double tol = 1e-12;
  double dt = 1e-3;
  double t_end = 20.0;
  int stride = 1;  // write every stride-th accepted step (the last one always)
};

struct AuditConfig {
  int samples = 50;         // bracket-table states
  int fradkin_states = 100;
  int rank_states = 100;
  double threshold = 1e-10;
  std::string gate = "normalized";  // "normalized": residual / max(1, scale); "absolute"
  double rank_fraction = 0.95;
};

struct PotentialConfig {
  std::vector<double> kappas{-1.0, 0.0, 1.0};
  double r_min = 0.05;
  double r_max = 3.0;
  int n = 60;
};

struct SamplingConfig {
  double margin = 0.05;
  double momentum = 1.0;  // momenta uniform in [-momentum, momentum]
};

struct OrbitConfig {
  double t_max = 200.0;
  double delta = 1e-4;
};

struct OutputConfig {
  std::string prefix = "curvedyn";  // files are <prefix>_<kind>.<ext>
};

/// Everything a command reads. Serializes to and from JSON; the resolved
/// form (after defaults, file and flags) reproduces a run exactly.
struct RunConfig {
  std::string system = "free";
  SystemParams params;
  std::optional<std::array<double, 6>> initial_state;  // (r, theta, phi, p_r, p_theta, p_phi)
  std::optional<std::uint64_t> seed;
  SamplingConfig sampling;
  IntegratorConfig integrator;
  AuditConfig audit;
  PotentialConfig potential;
  OrbitConfig orbit;
  OutputConfig output;
};

nlohmann::ordered_json to_json(const RunConfig& c);

/// Parses a config document. Errors are ConfigError messages that carry the
/// line (and column for syntax errors) in the original text; an empty source
/// name drops the location.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Seed from the config, else CURVEDYN_SEED, else kDefaultSeed.
std::uint64_t resolve_seed(const RunConfig& c);

SystemSpec make_spec(const RunConfig& c);
IntegratorOptions make_integrator_options(const IntegratorConfig& c);

/// %.17g; nan and inf spelled as such.
std::string format_double(double v);

// Commands. Each writes its files and a short summary to out and returns an
// exit code.
int cmd_trajectory(const RunConfig& c, std::ostream& out);
int cmd_audit(const RunConfig& c, std::ostream& out);
int cmd_potential(const RunConfig& c, std::ostream& out);
int cmd_closed_orbit(const RunConfig& c, std::ostream& out);
int cmd_list_systems(std::ostream& out);
int cmd_list_observables(const RunConfig& c, std::ostream& out);

/// Audit report without touching the file system.
nlohmann::ordered_json audit_report(const RunConfig& c, bool& passed);

/// Full command-line entry point.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace curvedyn::cli
