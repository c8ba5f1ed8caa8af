#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "curvedyn/audits.hpp"
#include "curvedyn/errors.hpp"
#include "curvedyn/sampling.hpp"

namespace curvedyn::cli {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

// --- config parsing with line tracking ---------------------------------------

int line_of(const std::string& text, std::size_t pos) {
  pos = std::min(pos, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

class ConfigReader {
 public:
  ConfigReader(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  // Position of "key" in the text, searched from the enclosing section.
  std::size_t locate(const std::string& key, std::size_t from) const {
    const auto p = text_.find("\"" + key + "\"", from);
    return p == std::string::npos ? from : p;
  }

  [[noreturn]] void fail(std::size_t pos, const std::string& msg) const {
    if (source_.empty()) throw ConfigError(msg);
    throw ConfigError(source_ + ":" + std::to_string(line_of(text_, pos)) + ": " + msg);
  }

  void check_keys(const json& obj, const std::set<std::string>& allowed, std::size_t from,
                  const std::string& section) const {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!allowed.count(it.key())) {
        fail(locate(it.key(), from),
             "unknown key '" + it.key() + "'" + (section.empty() ? "" : " in '" + section + "'"));
      }
    }
  }

  void number(const json& obj, const std::string& key, double& out, std::size_t from) const {
    if (!obj.contains(key)) return;
    const auto& v = obj[key];
    if (!v.is_number()) fail(locate(key, from), "'" + key + "' must be a number");
    out = v.get<double>();
  }

  void integer(const json& obj, const std::string& key, int& out, std::size_t from) const {
    if (!obj.contains(key)) return;
    const auto& v = obj[key];
    if (!v.is_number_integer()) fail(locate(key, from), "'" + key + "' must be an integer");
    out = v.get<int>();
  }

  void string(const json& obj, const std::string& key, std::string& out, std::size_t from) const {
    if (!obj.contains(key)) return;
    const auto& v = obj[key];
    if (!v.is_string()) fail(locate(key, from), "'" + key + "' must be a string");
    out = v.get<std::string>();
  }

  const json* section(const json& root, const std::string& key, std::size_t& pos) const {
    if (!root.contains(key)) return nullptr;
    pos = locate(key, 0);
    if (!root[key].is_object()) fail(pos, "'" + key + "' must be an object");
    return &root[key];
  }

 private:
  const std::string& text_;
  std::string source_;
};

template <class F>
void validate(const ConfigReader& rd, std::size_t pos, bool ok, const F& message) {
  if (!ok) rd.fail(pos, message());
}

}  // namespace

json to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["system"] = c.system;
  j["params"] = {{"kappa", c.params.kappa}, {"alpha", c.params.alpha}, {"k", c.params.k},
                 {"k1", c.params.k1},       {"k2", c.params.k2},       {"k3", c.params.k3}};
  j["initial_state"] = c.initial_state ? json(*c.initial_state) : json(nullptr);
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  j["sampling"] = {{"margin", c.sampling.margin}, {"momentum", c.sampling.momentum}};
  j["integrator"] = {{"method", c.integrator.method},
                     {"tol", c.integrator.tol},
                     {"dt", c.integrator.dt},
                     {"t_end", c.integrator.t_end},
                     {"stride", c.integrator.stride}};
  j["audit"] = {{"samples", c.audit.samples},
                {"fradkin_states", c.audit.fradkin_states},
                {"rank_states", c.audit.rank_states},
                {"threshold", c.audit.threshold},
                {"gate", c.audit.gate},
                {"rank_fraction", c.audit.rank_fraction}};
  j["potential"] = {{"kappas", c.potential.kappas},
                    {"r_min", c.potential.r_min},
                    {"r_max", c.potential.r_max},
                    {"n", c.potential.n}};
  j["orbit"] = {{"t_max", c.orbit.t_max}, {"delta", c.orbit.delta}};
  j["output"] = {{"prefix", c.output.prefix}};
  return j;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
    const auto line_start = text.rfind('\n', byte == 0 ? 0 : byte - 1);
    const std::size_t col = line_start == std::string::npos ? byte + 1 : byte - line_start;
    std::string what = e.what();
    if (const auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
    throw ConfigError(source + ":" + std::to_string(line_of(text, byte)) + ":" +
                      std::to_string(col) + ": " + what);
  }
  ConfigReader rd(text, source);
  if (!root.is_object()) rd.fail(0, "top level must be an object");
  rd.check_keys(root,
                {"schema_version", "system", "params", "initial_state", "seed", "sampling",
                 "integrator", "audit", "potential", "orbit", "output"},
                0, "");

  RunConfig c;
  if (root.contains("schema_version")) {
    const auto& v = root["schema_version"];
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
      rd.fail(rd.locate("schema_version", 0),
              "unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
    }
  }
  rd.string(root, "system", c.system, 0);
  try {
    system_from_string(c.system);
  } catch (const ConfigError& e) {
    rd.fail(rd.locate("system", 0), e.what());
  }

  std::size_t pos = 0;
  if (const json* p = rd.section(root, "params", pos)) {
    rd.check_keys(*p, {"kappa", "alpha", "k", "k1", "k2", "k3"}, pos, "params");
    rd.number(*p, "kappa", c.params.kappa, pos);
    rd.number(*p, "alpha", c.params.alpha, pos);
    rd.number(*p, "k", c.params.k, pos);
    rd.number(*p, "k1", c.params.k1, pos);
    rd.number(*p, "k2", c.params.k2, pos);
    rd.number(*p, "k3", c.params.k3, pos);
  }
  if (root.contains("initial_state") && !root["initial_state"].is_null()) {
    const auto& v = root["initial_state"];
    const auto at = rd.locate("initial_state", 0);
    if (!v.is_array() || v.size() != 6) rd.fail(at, "'initial_state' must be an array of 6 numbers");
    std::array<double, 6> s{};
    for (std::size_t i = 0; i < 6; ++i) {
      if (!v[i].is_number()) rd.fail(at, "'initial_state' must be an array of 6 numbers");
      s[i] = v[i].get<double>();
    }
    c.initial_state = s;
  }
  if (root.contains("seed") && !root["seed"].is_null()) {
    const auto& v = root["seed"];
    if (!v.is_number_unsigned()) rd.fail(rd.locate("seed", 0), "'seed' must be a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  }
  if (const json* p = rd.section(root, "sampling", pos)) {
    rd.check_keys(*p, {"margin", "momentum"}, pos, "sampling");
    rd.number(*p, "margin", c.sampling.margin, pos);
    rd.number(*p, "momentum", c.sampling.momentum, pos);
    validate(rd, rd.locate("margin", pos), c.sampling.margin >= 0.0 && c.sampling.margin < 1.0,
             [] { return std::string("'margin' must be in [0, 1)"); });
    validate(rd, rd.locate("momentum", pos), c.sampling.momentum > 0.0,
             [] { return std::string("'momentum' must be positive"); });
  }
  if (const json* p = rd.section(root, "integrator", pos)) {
    rd.check_keys(*p, {"method", "tol", "dt", "t_end", "stride"}, pos, "integrator");
    rd.string(*p, "method", c.integrator.method, pos);
    rd.number(*p, "tol", c.integrator.tol, pos);
    rd.number(*p, "dt", c.integrator.dt, pos);
    rd.number(*p, "t_end", c.integrator.t_end, pos);
    rd.integer(*p, "stride", c.integrator.stride, pos);
    try {
      method_from_string(c.integrator.method);
    } catch (const ConfigError& e) {
      rd.fail(rd.locate("method", pos), e.what());
    }
    validate(rd, rd.locate("tol", pos), c.integrator.tol > 0.0,
             [] { return std::string("'tol' must be positive"); });
    validate(rd, rd.locate("dt", pos), c.integrator.dt > 0.0,
             [] { return std::string("'dt' must be positive"); });
    validate(rd, rd.locate("t_end", pos), c.integrator.t_end > 0.0,
             [] { return std::string("'t_end' must be positive"); });
    validate(rd, rd.locate("stride", pos), c.integrator.stride >= 1,
             [] { return std::string("'stride' must be at least 1"); });
  }
  if (const json* p = rd.section(root, "audit", pos)) {
    rd.check_keys(*p, {"samples", "fradkin_states", "rank_states", "threshold", "gate", "rank_fraction"},
                  pos, "audit");
    rd.integer(*p, "samples", c.audit.samples, pos);
    rd.integer(*p, "fradkin_states", c.audit.fradkin_states, pos);
    rd.integer(*p, "rank_states", c.audit.rank_states, pos);
    rd.number(*p, "threshold", c.audit.threshold, pos);
    rd.string(*p, "gate", c.audit.gate, pos);
    rd.number(*p, "rank_fraction", c.audit.rank_fraction, pos);
    validate(rd, rd.locate("gate", pos), c.audit.gate == "normalized" || c.audit.gate == "absolute",
             [] { return std::string("'gate' must be \"normalized\" or \"absolute\""); });
    validate(rd, rd.locate("samples", pos),
             c.audit.samples >= 1 && c.audit.fradkin_states >= 1 && c.audit.rank_states >= 1,
             [] { return std::string("state counts must be at least 1"); });
    validate(rd, rd.locate("threshold", pos), c.audit.threshold > 0.0,
             [] { return std::string("'threshold' must be positive"); });
  }
  if (const json* p = rd.section(root, "potential", pos)) {
    rd.check_keys(*p, {"kappas", "r_min", "r_max", "n"}, pos, "potential");
    if (p->contains("kappas")) {
      const auto& v = (*p)["kappas"];
      const auto at = rd.locate("kappas", pos);
      if (!v.is_array() || v.empty()) rd.fail(at, "'kappas' must be a non-empty array of numbers");
      c.potential.kappas.clear();
      for (const auto& e : v) {
        if (!e.is_number()) rd.fail(at, "'kappas' must be a non-empty array of numbers");
        c.potential.kappas.push_back(e.get<double>());
      }
    }
    rd.number(*p, "r_min", c.potential.r_min, pos);
    rd.number(*p, "r_max", c.potential.r_max, pos);
    rd.integer(*p, "n", c.potential.n, pos);
    validate(rd, rd.locate("r_max", pos), c.potential.r_max > c.potential.r_min,
             [] { return std::string("'r_max' must exceed 'r_min'"); });
    validate(rd, rd.locate("n", pos), c.potential.n >= 2,
             [] { return std::string("'n' must be at least 2"); });
  }
  if (const json* p = rd.section(root, "orbit", pos)) {
    rd.check_keys(*p, {"t_max", "delta"}, pos, "orbit");
    rd.number(*p, "t_max", c.orbit.t_max, pos);
    rd.number(*p, "delta", c.orbit.delta, pos);
    validate(rd, rd.locate("t_max", pos), c.orbit.t_max > 0.0,
             [] { return std::string("'t_max' must be positive"); });
  }
  if (const json* p = rd.section(root, "output", pos)) {
    rd.check_keys(*p, {"prefix"}, pos, "output");
    rd.string(*p, "prefix", c.output.prefix, pos);
  }

  {
    const auto used = parameter_names(system_from_string(c.system));
    const std::size_t ppos = rd.locate("params", 0);
    const std::pair<const char*, double> given[] = {{"kappa", c.params.kappa}, {"alpha", c.params.alpha},
                                                    {"k", c.params.k},         {"k1", c.params.k1},
                                                    {"k2", c.params.k2},       {"k3", c.params.k3}};
    for (const auto& [name, value] : given) {
      if (value != 0.0 && std::find(used.begin(), used.end(), name) == used.end()) {
        rd.fail(rd.locate(name, ppos), "system " + c.system + " does not use parameter " + name);
      }
    }
  }
  // Remaining parameter checks are done by the system itself.
  try {
    make_spec(c);
  } catch (const ConfigError& e) {
    rd.fail(rd.locate("params", 0), e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::uint64_t resolve_seed(const RunConfig& c) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("CURVEDYN_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || env[0] == '-') {
      throw ConfigError("CURVEDYN_SEED must be a non-negative integer, got '" + std::string(env) + "'");
    }
    return v;
  }
  return kDefaultSeed;
}

SystemSpec make_spec(const RunConfig& c) { return SystemSpec(system_from_string(c.system), c.params); }

IntegratorOptions make_integrator_options(const IntegratorConfig& c) {
  IntegratorOptions o;
  o.method = method_from_string(c.method);
  o.tol = c.tol;
  o.dt = c.dt;
  return o;
}

namespace {

SamplingOptions sampling_options(const RunConfig& c) {
  SamplingOptions o;
  o.margin = c.sampling.margin;
  o.momentum = c.sampling.momentum;
  return o;
}

PhaseState initial_state(const RunConfig& c, const SystemSpec& spec, Rng& rng) {
  if (c.initial_state) {
    const auto& v = *c.initial_state;
    PhaseState s{{v[0], v[1], v[2]}, v[3], v[4], v[5]};
    if (!is_valid(spec.kappa(), s)) throw ConfigError("initial_state lies outside the chart");
    return s;
  }
  return sample_state(spec, rng, sampling_options(c));
}

json state_json(const PhaseState& s) {
  return json::array({s.q.r, s.q.theta, s.q.phi, s.p_r, s.p_theta, s.p_phi});
}

json report_header(const RunConfig& c, const std::string& command, std::uint64_t seed) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["rng"] = std::string(kRngName);
  j["seed"] = seed;
  RunConfig resolved = c;
  resolved.seed = seed;
  j["config"] = to_json(resolved);
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << content;
}

std::string identity_group(const std::string& name) {
  if (name.rfind("{KR", 0) == 0 && name.rfind("{KRL", 0) != 0) return "quartic";
  if (name.rfind("{R", 0) == 0 || name.rfind("{Q", 0) == 0) return "lambda_pairing";
  return "bracket";
}

}  // namespace

int cmd_trajectory(const RunConfig& c, std::ostream& out) {
  const SystemSpec spec = make_spec(c);
  const std::uint64_t seed = resolve_seed(c);
  Rng rng(seed);
  const PhaseState s0 = initial_state(c, spec, rng);
  const Trajectory traj = integrate(spec, s0, c.integrator.t_end, make_integrator_options(c.integrator));

  std::string csv = "t,r,theta,phi,p_r,p_theta,p_phi\n";
  const std::size_t n = traj.times.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i % static_cast<std::size_t>(c.integrator.stride) != 0 && i + 1 != n) continue;
    const auto& s = traj.states[i];
    for (double v : {traj.times[i], s.q.r, s.q.theta, s.q.phi, s.p_r, s.p_theta, s.p_phi}) {
      csv += format_double(v);
      csv += ',';
    }
    csv.back() = '\n';
  }
  const std::string states_path = c.output.prefix + "_states.csv";
  write_file(states_path, csv);

  const ConservationReport h = conservation_report(traj, {spec.hamiltonian()});
  const ConservationReport rep = conservation_report(traj, spec.integrals());
  json j = report_header(c, "trajectory", seed);
  j["initial_state"] = state_json(s0);
  j["t_final"] = traj.times.back();
  j["steps"] = n - 1;
  j["truncated"] = traj.truncated;
  j["truncation_reason"] = traj.truncation_reason;
  auto row_json = [](const ConservationRow& r) {
    return json{{"name", r.name},
                {"order", is_quartic(r.name) ? "quartic" : "quadratic"},
                {"initial", number_or_string(r.initial)},
                {"max_abs_drift", number_or_string(r.max_abs_drift)},
                {"max_rel_drift", number_or_string(r.max_rel_drift)}};
  };
  j["hamiltonian"] = row_json(h.rows.front());
  j["hamiltonian"].erase("order");
  j["integrals"] = json::array();
  for (const auto& r : rep.rows) j["integrals"].push_back(row_json(r));
  const std::string cons_path = c.output.prefix + "_conservation.json";
  write_file(cons_path, j.dump(2) + "\n");

  out << "wrote " << states_path << " (" << n << " states) and " << cons_path << "\n";
  if (traj.truncated) out << "integration truncated at t = " << format_double(traj.times.back())
                          << ": " << traj.truncation_reason << "\n";
  return kExitOk;
}

json audit_report(const RunConfig& c, bool& passed) {
  const SystemSpec spec = make_spec(c);
  const std::uint64_t seed = resolve_seed(c);
  Rng rng(seed);
  const SamplingOptions so = sampling_options(c);
  const double thr = c.audit.threshold;
  passed = true;

  json j = report_header(c, "audit", seed);
  j["gate"] = c.audit.gate;
  j["threshold"] = thr;

  json brackets = json::array();
  for (const auto& r : bracket_table_audit(spec, c.audit.samples, rng, so)) {
    const double normalized = r.residual / std::max(1.0, r.scale);
    const double gated = c.audit.gate == "absolute" ? r.residual : normalized;
    const bool ok = gated < thr;
    passed = passed && ok;
    brackets.push_back({{"identity", r.identity},
                        {"group", identity_group(r.identity)},
                        {"samples", r.samples},
                        {"max_residual", r.residual},
                        {"scale", r.scale},
                        {"normalized_residual", normalized},
                        {"expected", r.expected},
                        {"computed", r.computed},
                        {"state", state_json(r.state)},
                        {"pass", ok}});
  }
  j["brackets"] = brackets;

  if (spec.id() == SystemId::oscillator) {
    std::map<std::string, std::pair<std::string, double>> worst;
    std::vector<std::string> order;
    for (int n = 0; n < c.audit.fradkin_states; ++n) {
      const PhaseState s = sample_state(spec, rng, so);
      for (const auto& f : fradkin_audit(spec.kappa(), spec.params().alpha, s)) {
        auto [it, fresh] = worst.try_emplace(f.identity, f.property, 0.0);
        if (fresh) order.push_back(f.identity);
        it->second.second = std::max(it->second.second, f.value.relative_residual());
      }
    }
    json fr = json::array();
    for (const auto& name : order) {
      const auto& [prop, rel] = worst[name];
      const bool ok = rel < thr;
      passed = passed && ok;
      fr.push_back({{"property", prop}, {"identity", name}, {"max_relative_residual", rel}, {"pass", ok}});
    }
    j["fradkin"] = fr;
  }

  std::vector<NamedSet> sets = spec.independence_sets();
  if (spec.id() == SystemId::oscillator) {
    const ObservableParams op = spec.observable_params();
    sets.push_back({"fradkin_family",
                    {fradkin_K(1, 1, op), fradkin_K(2, 2, op), fradkin_K(3, 3, op),
                     fradkin_K(1, 2, op), fradkin_K(2, 3, op), fradkin_K(3, 1, op)}});
  }
  json ind = json::array();
  for (const auto& set : sets) {
    const int expected = set.name == "fradkin_family" ? 5 : static_cast<int>(set.members.size());
    std::vector<int> ranks;
    int full = 0, above = 0;
    for (int n = 0; n < c.audit.rank_states; ++n) {
      const PhaseState s = sample_state(spec, rng, so);
      const int rank = independence_rank(set.members, s).rank;
      ranks.push_back(rank);
      full += rank == expected;
      above += rank > expected;
    }
    const double fraction = static_cast<double>(full) / c.audit.rank_states;
    const bool ok = fraction >= c.audit.rank_fraction && above == 0;
    passed = passed && ok;
    json names = json::array();
    for (const auto& m : set.members) names.push_back(m.name());
    ind.push_back({{"set", set.name},
                   {"members", names},
                   {"expected_rank", expected},
                   {"fraction_at_expected", fraction},
                   {"ranks", ranks},
                   {"pass", ok}});
  }
  j["independence"] = ind;
  j["passed"] = passed;
  return j;
}

int cmd_audit(const RunConfig& c, std::ostream& out) {
  bool passed = false;
  const json j = audit_report(c, passed);
  const std::string path = c.output.prefix + "_audit.json";
  write_file(path, j.dump(2) + "\n");
  int failures = 0;
  for (const char* key : {"brackets", "fradkin", "independence"}) {
    if (!j.contains(key)) continue;
    for (const auto& row : j[key]) failures += !row["pass"].get<bool>();
  }
  out << "wrote " << path << ": " << j["brackets"].size() << " identities, "
      << (passed ? "all checks passed" : std::to_string(failures) + " check(s) failed") << "\n";
  return passed ? kExitOk : kExitCheckFailed;
}

int cmd_potential(const RunConfig& c, std::ostream& out) {
  for (double kappa : c.potential.kappas) {
    RunConfig ck = c;
    ck.params.kappa = kappa;
    const SystemSpec spec = make_spec(ck);
    std::string csv = "r,V\n";
    for (const auto& row : potential_profile(spec, c.potential.r_min, c.potential.r_max, c.potential.n)) {
      csv += format_double(row.r) + "," + (row.valid ? format_double(row.V) : std::string("nan")) + "\n";
    }
    const std::string path = c.output.prefix + "_potential_" + c.system + "_kappa_" + format_double(kappa) + ".csv";
    write_file(path, csv);
    out << "wrote " << path << "\n";
  }
  return kExitOk;
}

int cmd_closed_orbit(const RunConfig& c, std::ostream& out) {
  const SystemSpec spec = make_spec(c);
  const std::uint64_t seed = resolve_seed(c);
  Rng rng(seed);
  const PhaseState s0 = initial_state(c, spec, rng);
  ClosedOrbitOptions opts;
  opts.tol = c.integrator.tol;
  opts.delta = c.orbit.delta;

  json j = report_header(c, "closed-orbit", seed);
  j["initial_state"] = state_json(s0);
  j["energy"] = hamiltonian(spec, s0);
  bool closed = false;
  try {
    const ClosedOrbitResult r = closed_orbit_check(spec, s0, c.orbit.t_max, opts);
    closed = r.is_closed;
    j["status"] = r.is_closed ? "closed" : "not_closed";
    j["return_distance"] = r.return_distance;
    j["period_estimate"] = r.period_estimate;
  } catch (const NoReturn& e) {
    j["status"] = "no_return";
    j["return_distance"] = e.best_distance();
    j["message"] = e.what();
  } catch (const Unbounded& e) {
    j["status"] = "unbounded";
    j["message"] = e.what();
  }
  j["is_closed"] = closed;
  const std::string path = c.output.prefix + "_closed_orbit.json";
  write_file(path, j.dump(2) + "\n");
  out << "wrote " << path << ": " << j["status"].get<std::string>() << "\n";
  return closed ? kExitOk : kExitCheckFailed;
}

int cmd_list_systems(std::ostream& out) {
  for (SystemId id : all_systems()) {
    out << to_string(id);
    const auto names = parameter_names(id);
    for (std::size_t i = 0; i < names.size(); ++i) out << (i == 0 ? "  " : ", ") << names[i];
    out << "\n";
  }
  return kExitOk;
}

int cmd_list_observables(const RunConfig& c, std::ostream& out) {
  const SystemSpec spec = make_spec(c);
  for (const auto& name : spec.observable_names()) out << name << "\n";
  return kExitOk;
}

// --- command line -----------------------------------------------------------------

namespace {

struct Flags {
  std::string config_path;
  bool emit_config = false;
  std::string system;
  double kappa = 0, alpha = 0, k = 0, k1 = 0, k2 = 0, k3 = 0;
  std::vector<double> state;
  std::uint64_t seed = 0;
  double margin = 0, momentum = 0;
  std::string method;
  double tol = 0, dt = 0, t_end = 0;
  int stride = 1;
  int samples = 0, fradkin_states = 0, rank_states = 0;
  double threshold = 0;
  std::string gate;
  std::vector<double> kappas;
  double r_min = 0, r_max = 0;
  int n = 0;
  double t_max = 0, delta = 0;
  std::string prefix;
};

enum Use : unsigned { kSystem = 1, kState = 2, kIntegrate = 4, kAudit = 8, kPotential = 16, kOrbit = 32 };

struct Registered {
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;
};

void add_common(CLI::App* sub, Flags& f, Registered& reg, unsigned use) {
  sub->add_option("--config", f.config_path, "JSON config file")->check(CLI::ExistingFile);
  sub->add_flag("--emit-config", f.emit_config, "print the resolved config and exit");
  auto over = [&reg](CLI::Option* o, std::function<void(RunConfig&)> apply) {
    reg.overrides.emplace_back(o, std::move(apply));
  };
  if (use & kSystem) {
    over(sub->add_option("--system", f.system, "free, oscillator, sw, osc112, kepler, kepler123"),
         [&f](RunConfig& c) { c.system = f.system; });
    over(sub->add_option("--kappa", f.kappa, "curvature"), [&f](RunConfig& c) { c.params.kappa = f.kappa; });
    over(sub->add_option("--alpha", f.alpha), [&f](RunConfig& c) { c.params.alpha = f.alpha; });
    over(sub->add_option("--k", f.k), [&f](RunConfig& c) { c.params.k = f.k; });
    over(sub->add_option("--k1", f.k1), [&f](RunConfig& c) { c.params.k1 = f.k1; });
    over(sub->add_option("--k2", f.k2), [&f](RunConfig& c) { c.params.k2 = f.k2; });
    over(sub->add_option("--k3", f.k3), [&f](RunConfig& c) { c.params.k3 = f.k3; });
    over(sub->add_option("--prefix", f.prefix, "output file prefix"),
         [&f](RunConfig& c) { c.output.prefix = f.prefix; });
  }
  if (use & kState) {
    over(sub->add_option("--state", f.state, "r theta phi p_r p_theta p_phi")->expected(6),
         [&f](RunConfig& c) {
           std::array<double, 6> s{};
           std::copy(f.state.begin(), f.state.end(), s.begin());
           c.initial_state = s;
         });
  }
  if (use & (kState | kAudit)) {
    over(sub->add_option("--seed", f.seed, "RNG seed (fallback: CURVEDYN_SEED)"),
         [&f](RunConfig& c) { c.seed = f.seed; });
    over(sub->add_option("--margin", f.margin), [&f](RunConfig& c) { c.sampling.margin = f.margin; });
    over(sub->add_option("--momentum", f.momentum), [&f](RunConfig& c) { c.sampling.momentum = f.momentum; });
  }
  if (use & kIntegrate) {
    over(sub->add_option("--method", f.method, "rk45_adaptive, rk4_fixed, implicit_midpoint"),
         [&f](RunConfig& c) { c.integrator.method = f.method; });
    over(sub->add_option("--dt", f.dt), [&f](RunConfig& c) { c.integrator.dt = f.dt; });
    over(sub->add_option("--t-end", f.t_end), [&f](RunConfig& c) { c.integrator.t_end = f.t_end; });
    over(sub->add_option("--stride", f.stride), [&f](RunConfig& c) { c.integrator.stride = f.stride; });
  }
  if (use & (kIntegrate | kOrbit)) {
    over(sub->add_option("--tol", f.tol), [&f](RunConfig& c) { c.integrator.tol = f.tol; });
  }
  if (use & kAudit) {
    over(sub->add_option("--samples", f.samples), [&f](RunConfig& c) { c.audit.samples = f.samples; });
    over(sub->add_option("--fradkin-states", f.fradkin_states),
         [&f](RunConfig& c) { c.audit.fradkin_states = f.fradkin_states; });
    over(sub->add_option("--rank-states", f.rank_states),
         [&f](RunConfig& c) { c.audit.rank_states = f.rank_states; });
    over(sub->add_option("--threshold", f.threshold), [&f](RunConfig& c) { c.audit.threshold = f.threshold; });
    over(sub->add_option("--gate", f.gate, "normalized or absolute"),
         [&f](RunConfig& c) { c.audit.gate = f.gate; });
  }
  if (use & kPotential) {
    over(sub->add_option("--kappas", f.kappas, "curvatures to sweep"),
         [&f](RunConfig& c) { c.potential.kappas = f.kappas; });
    over(sub->add_option("--r-min", f.r_min), [&f](RunConfig& c) { c.potential.r_min = f.r_min; });
    over(sub->add_option("--r-max", f.r_max), [&f](RunConfig& c) { c.potential.r_max = f.r_max; });
    over(sub->add_option("--n", f.n), [&f](RunConfig& c) { c.potential.n = f.n; });
  }
  if (use & kOrbit) {
    over(sub->add_option("--t-max", f.t_max), [&f](RunConfig& c) { c.orbit.t_max = f.t_max; });
    over(sub->add_option("--delta", f.delta), [&f](RunConfig& c) { c.orbit.delta = f.delta; });
  }
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hamiltonian systems on three-dimensional spaces of constant curvature"};
  app.require_subcommand(1);
  Flags f;
  std::map<CLI::App*, Registered> regs;
  auto sub = [&](const char* name, const char* help, unsigned use) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, f, regs[s], use);
    return s;
  };
  CLI::App* traj = sub("trajectory", "integrate one trajectory; writes states CSV and conservation JSON",
                       kSystem | kState | kIntegrate);
  CLI::App* audit = sub("audit", "bracket, Fradkin and independence audit; nonzero exit on failure",
                        kSystem | kAudit);
  CLI::App* pot = sub("potential", "potential profile V(r) for a sweep of curvatures", kSystem | kPotential);
  CLI::App* orbit = sub("closed-orbit", "check that an orbit returns to its initial state",
                        kSystem | kState | kOrbit);
  CLI::App* lsys = app.add_subcommand("list-systems", "print system names and their parameters");
  CLI::App* lobs = sub("list-observables", "print the observable names of a system", kSystem);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (lsys->parsed()) return cmd_list_systems(out);
    CLI::App* active = app.get_subcommands().front();
    RunConfig c = f.config_path.empty() ? RunConfig{} : load_config(f.config_path);
    for (const auto& [opt, apply] : regs[active].overrides) {
      if (opt->count() > 0) apply(c);
    }
    // Flags bypass the file checks, so validate the merged result again.
    c = parse_config(to_json(c).dump(2), "");
    if (f.emit_config) {
      RunConfig resolved = c;
      if (active != pot && active != lobs) resolved.seed = resolve_seed(c);
      out << to_json(resolved).dump(2) << "\n";
      return kExitOk;
    }
    if (active == traj) return cmd_trajectory(c, out);
    if (active == audit) return cmd_audit(c, out);
    if (active == pot) return cmd_potential(c, out);
    if (active == orbit) return cmd_closed_orbit(c, out);
    if (active == lobs) return cmd_list_observables(c, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace curvedyn::cli
