#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "curvedyn/errors.hpp"

using namespace curvedyn;
using namespace curvedyn::cli;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "curvedyn");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string config_error(const std::string& text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, DefaultsRoundTrip) {
  RunConfig c;
  c.system = "oscillator";
  c.params.alpha = 1.5;
  c.seed = 7;
  c.initial_state = std::array<double, 6>{1, 1, 0, 0.1, 0.2, 0.3};
  const RunConfig back = parse_config(to_json(c).dump(2));
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Config, ErrorsCarryTheLine) {
  EXPECT_EQ(config_error("{\n  \"system\": \"free\",\n  \"integrator\": {\n    \"tol\": \"small\"\n  }\n}"),
            "cfg.json:4: 'tol' must be a number");
  EXPECT_NE(config_error("{\n  \"system\": \"free\",\n  \"bogus\": 1\n}").find("cfg.json:3:"),
            std::string::npos);
  EXPECT_NE(config_error("{\n  \"system\": \"free\",\n  \"params\": {\n    \"kappa\": 1,\n    \"alpha\": 2\n  }\n}")
                .find("cfg.json:5:"),
            std::string::npos);
  EXPECT_NE(config_error("{\n  \"system\": \"free\"\n  \"seed\": 3\n}").find("cfg.json:3:"), std::string::npos);
  EXPECT_NE(config_error("{\"system\": \"nope\"}").find("unknown system"), std::string::npos);
  EXPECT_NE(config_error("{\"integrator\": {\"tol\": -1}}").find("tol"), std::string::npos);
}

TEST(Cli, ConfigErrorsExitWithTwo) {
  write("cli_bad.json", "{\n  \"system\": \"kepler\",\n  \"params\": {\"kappa\": \"x\"}\n}\n");
  const Result r = run_cli({"trajectory", "--config", "cli_bad.json"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("cli_bad.json:3"), std::string::npos) << r.err;
  EXPECT_EQ(run_cli({"trajectory", "--system", "free", "--alpha", "1"}).code, kExitConfig);
  EXPECT_EQ(run_cli({"trajectory", "--method", "euler"}).code, kExitConfig);
  EXPECT_EQ(run_cli({"nonsense"}).code, kExitConfig);
}

TEST(Cli, EmitConfigRoundTrip) {
  const Result a = run_cli({"trajectory", "--system", "kepler", "--kappa", "-0.5", "--k", "-1", "--seed", "9",
                            "--emit-config"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  write("cli_emitted.json", a.out);
  const Result b = run_cli({"trajectory", "--config", "cli_emitted.json", "--emit-config"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(parse_config(a.out).seed.value(), 9u);
}

TEST(Cli, SeedFallsBackToEnvironment) {
  RunConfig c;
  ::unsetenv("CURVEDYN_SEED");
  EXPECT_EQ(resolve_seed(c), kDefaultSeed);
  ::setenv("CURVEDYN_SEED", "1234", 1);
  EXPECT_EQ(resolve_seed(c), 1234u);
  c.seed = 5;
  EXPECT_EQ(resolve_seed(c), 5u);
  c.seed.reset();
  ::setenv("CURVEDYN_SEED", "-3", 1);
  EXPECT_THROW(resolve_seed(c), ConfigError);
  ::unsetenv("CURVEDYN_SEED");
}

TEST(Cli, TrajectoryIsDeterministic) {
  const std::vector<std::string> args{"trajectory", "--system", "oscillator", "--kappa", "0.4", "--alpha",
                                      "1.2", "--seed", "3", "--t-end", "2"};
  auto a1 = args;
  a1.insert(a1.end(), {"--prefix", "cli_det_a"});
  auto a2 = args;
  a2.insert(a2.end(), {"--prefix", "cli_det_b"});
  ASSERT_EQ(run_cli(a1).code, kExitOk);
  ASSERT_EQ(run_cli(a2).code, kExitOk);
  const std::string s1 = slurp("cli_det_a_states.csv");
  EXPECT_FALSE(s1.empty());
  EXPECT_EQ(s1, slurp("cli_det_b_states.csv"));
  EXPECT_EQ(s1.substr(0, s1.find('\n')), "t,r,theta,phi,p_r,p_theta,p_phi");

  const auto cons = nlohmann::json::parse(slurp("cli_det_a_conservation.json"));
  EXPECT_EQ(cons["schema_version"], kSchemaVersion);
  EXPECT_EQ(cons["seed"], 3);
  EXPECT_EQ(cons["integrals"].size(), 9u);
  for (const auto& row : cons["integrals"]) EXPECT_LT(row["max_rel_drift"].get<double>(), 1e-9);
}

TEST(Cli, AuditExitCodes) {
  const Result ok = run_cli({"audit", "--system", "kepler", "--kappa", "0.5", "--k", "-1", "--samples", "10",
                             "--rank-states", "20", "--prefix", "cli_audit"});
  EXPECT_EQ(ok.code, kExitOk) << ok.out << ok.err;
  const auto rep = nlohmann::json::parse(slurp("cli_audit_audit.json"));
  EXPECT_FALSE(rep["brackets"].empty());

  // An impossible threshold must fail the audit.
  const Result bad = run_cli({"audit", "--system", "kepler", "--kappa", "0.5", "--k", "-1", "--samples", "10",
                              "--rank-states", "20", "--threshold", "1e-300", "--gate", "absolute", "--prefix",
                              "cli_audit_bad"});
  EXPECT_EQ(bad.code, kExitCheckFailed);
}

TEST(Cli, PotentialFiles) {
  const Result r = run_cli({"potential", "--system", "oscillator", "--alpha", "1", "--kappas", "-1", "0", "1",
                            "--r-min", "0.5", "--r-max", "3.5", "--n", "7", "--prefix", "cli_pot"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(".")) {
    if (e.path().filename().string().rfind("cli_pot_potential_oscillator_kappa_", 0) == 0) ++files;
  }
  EXPECT_EQ(files, 3);
}

TEST(Cli, ListCommands) {
  const Result sys = run_cli({"list-systems"});
  EXPECT_EQ(sys.code, kExitOk);
  EXPECT_NE(sys.out.find("kepler123"), std::string::npos);
  const Result obs = run_cli({"list-observables", "--system", "osc112", "--alpha", "1"});
  EXPECT_EQ(obs.code, kExitOk);
  EXPECT_NE(obs.out.find("KRL2"), std::string::npos);
}

TEST(Cli, ClosedOrbitCommand) {
  const Result r = run_cli({"closed-orbit", "--system", "kepler", "--kappa", "0.3", "--k", "-1", "--state", "1",
                            "1.2", "0.3", "0.1", "0.3", "0.5", "--prefix", "cli_orbit"});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  const auto rep = nlohmann::json::parse(slurp("cli_orbit_closed_orbit.json"));
  EXPECT_EQ(rep["status"], "closed");
}
