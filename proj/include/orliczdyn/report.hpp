#pragma once

// Command layer: JSON serialization of every result type, the report
// envelope, and the four commands behind the CLI. Commands return the report
// and an exit code; the CLI only handles files and flags.

#include "orliczdyn/config.hpp"
#include "orliczdyn/criteria.hpp"
#include "orliczdyn/lab.hpp"
#include "orliczdyn/orlicz.hpp"
#include "orliczdyn/young.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace orliczdyn {

inline constexpr const char* kToolName = "orliczdyn";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kExitWitness = 0, kExitError = 1, kExitObstruction = 2, kExitInconclusive = 3 };

using nlohmann::json;

/// JSON has no infinities; non-finite values are written as null.
inline json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json to_json(const Obstruction& o) {
  json j{{"kind", to_string(o.kind)}, {"bound", number(o.bound)}};
  if (o.kind == Obstruction::Kind::Torsion) j["order"] = static_cast<integer>(o.bound);
  return j;
}

inline json to_json(const WitnessEntry& w) {
  json by_l = json::array();
  for (double s : w.sup_by_l) by_l.push_back(number(s));
  return {{"epsilon", w.epsilon}, {"n", w.n}, {"sup", number(w.sup)}, {"sup_by_l", by_l}};
}

inline json to_json(const SeriesPoint& p) {
  json j{{"n", p.n}, {"sup_phi", number(p.sup_phi)}, {"sup_phi_tilde", number(p.sup_phi_tilde)}};
  if (p.chaos_sum) j["chaos_sum"] = number(*p.chaos_sum);
  return j;
}

inline json to_json(const Budget& b) {
  return {{"N_max", b.n_max}, {"depth", b.depth}, {"L_max", b.l_max}, {"candidates", b.candidates}};
}

inline json to_json(const Verdict& v) {
  json j{{"outcome", to_string(v.outcome)}, {"budget", to_json(v.budget)}};
  j["witness"] = json::array();
  for (const auto& w : v.witness) j["witness"].push_back(to_json(w));
  j["obstruction"] = v.obstruction ? to_json(*v.obstruction) : json(nullptr);
  j["separation_constant"] = v.separation_constant ? json(*v.separation_constant) : json(nullptr);
  if (v.tail_bounded) j["tail_bounded"] = *v.tail_bounded;
  j["note"] = v.note;
  j["series"] = json::array();
  for (const auto& p : v.series) j["series"].push_back(to_json(p));
  return j;
}

inline json to_json(const AuditReport& a) {
  return {{"consistent", a.consistent()}, {"findings", a.findings}, {"violations", a.violations}};
}

inline json to_json(const ReturnReport& r) {
  json res = json::array();
  for (double x : r.residuals) res.push_back(number(x));
  json bnd = json::array();
  for (double x : r.bounds) bnd.push_back(number(x));
  return {{"kind", "return"},          {"n", r.n},
          {"L", r.depth},              {"epsilon", r.epsilon},
          {"residual_base", number(r.residual_base)}, {"residuals", res},
          {"bound_base", number(r.bound_base)},       {"bounds", bnd},
          {"success", r.success}};
}

inline json to_json(const PeriodicityReport& r) {
  return {{"kind", "periodicity"},
          {"n", r.n},
          {"L_trunc", r.truncation},
          {"defect", number(r.defect)},
          {"predicted_bound", number(r.predicted_bound)},
          {"rounding_allowance", number(r.rounding_allowance)},
          {"approximation_residual", number(r.approximation_residual)},
          {"ratio", number(r.ratio)},
          {"ill_conditioned", r.ill_conditioned},
          {"within_bound", r.within_bound}};
}

inline json to_json(const Delta2Report& d) {
  return {{"ratio_sup", number(d.ratio_sup)}, {"argmax_t", number(d.argmax_t)}, {"t_lo", d.t_lo},
          {"t_hi", d.t_hi},                   {"n_grid", d.n_grid},             {"skipped", d.skipped},
          {"evidence_only", d.evidence_only}};
}

template <DiscreteGroup G>
json to_json(const G& grp, const OrliczVector<G>& f) {
  json out = json::array();
  for (const auto& [x, v] : f.entries()) out.push_back(json::array({grp.coords(x), v}));
  return out;
}

/// Reads a vector from a JSON file: either a bare [[element, value], ...]
/// array or an object with a "vector" field.
inline std::vector<std::pair<Coords, double>> load_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open vector file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("vector file '" + path + "': " + e.what());
  }
  if (j.is_object() && j.contains("vector")) j = j.at("vector");
  try {
    return detail::as_pairs(j, "vector");
  } catch (const ConfigError& e) {
    throw ParseError("vector file '" + path + "': " + e.what());
  }
}

struct CommandOptions {
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> vector_path;
};

struct CommandResult {
  json report;
  int exit_code = kExitError;
  std::string csv;      ///< series export
  std::string summary;  ///< one-line human-readable result
};

/// Report with the timing block removed; the byte-stable part.
inline json deterministic_part(json report) {
  report.erase("timings");
  return report;
}

namespace detail {

inline std::string fmt(double x) {
  if (!std::isfinite(x)) return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

class Envelope {
public:
  Envelope(std::string command, const RunConfig& cfg) : start_(std::chrono::steady_clock::now()) {
    report_["schema_version"] = kSchemaVersion;
    report_["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    report_["command"] = std::move(command);
    report_["config"] = emit_config(cfg);
  }

  json& operator[](const char* key) { return report_[key]; }

  json finish() {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    report_["timings"] = {{"total_ms", ms}};
    return std::move(report_);
  }

private:
  json report_;
  std::chrono::steady_clock::time_point start_;
};

inline std::vector<Property> requested_properties(const RunConfig& cfg) {
  if (cfg.property == "all") return {std::begin(kAllProperties), std::end(kAllProperties)};
  return {*property_from_string(cfg.property)};
}

inline std::string series_csv(const std::vector<SeriesPoint>& s) {
  std::string out = "n,sup_phi,sup_phi_tilde,chaos_sum\n";
  for (const auto& p : s) {
    out += std::to_string(p.n) + "," + fmt(p.sup_phi) + "," + fmt(p.sup_phi_tilde) + "," +
           (p.chaos_sum ? fmt(*p.chaos_sum) : std::string()) + "\n";
  }
  return out;
}

/// Combined exit code over several verdicts: any obstruction wins, then any
/// inconclusive, else witness.
inline int combined_exit(const std::map<Property, Verdict>& verdicts) {
  bool inconclusive = false;
  for (const auto& [p, v] : verdicts) {
    if (v.outcome == Outcome::ObstructionFound) return kExitObstruction;
    if (v.outcome == Outcome::Inconclusive) inconclusive = true;
  }
  return inconclusive ? kExitInconclusive : kExitWitness;
}

inline RunConfig with_seed(RunConfig cfg, const CommandOptions& opt) {
  if (opt.seed) cfg.seed = *opt.seed;
  return cfg;
}

} // namespace detail

/// Obstruction scan followed by the requested checker(s). With property "all"
/// the implication audit is attached.
inline CommandResult cmd_check(const RunConfig& config, const CommandOptions& opt = {}) {
  const RunConfig cfg = detail::with_seed(config, opt);
  require_fields(cfg, {"group", "a", "weight", "K"}, "check");
  detail::Envelope env("check", cfg);
  CommandResult out;

  std::map<Property, Verdict> verdicts = with_group(*cfg.group, [&](const auto& grp) {
    const auto req = build_request(grp, cfg, opt.jobs);
    std::map<Property, Verdict> vs;
    for (Property p : detail::requested_properties(cfg)) vs.emplace(p, run_check(req, p));
    return vs;
  });

  json jv = json::object();
  for (const auto& [p, v] : verdicts) jv[std::string(to_string(p))] = to_json(v);
  env["verdicts"] = jv;
  if (verdicts.size() > 1) env["audit"] = to_json(implication_audit(verdicts));

  const auto& first = verdicts.begin()->second;
  out.csv = detail::series_csv(first.series);
  out.exit_code = detail::combined_exit(verdicts);
  std::string s;
  for (const auto& [p, v] : verdicts) {
    s += std::string(s.empty() ? "" : " ") + std::string(to_string(p)) + "=" + std::string(to_string(v.outcome));
    if (!v.witness.empty()) s += "(n=" + std::to_string(v.witness.front().n) + ")";
  }
  out.summary = s;
  out.report = env.finish();
  return out;
}

namespace detail {

/// Lab target for a witness entry when no explicit lab_epsilon is set: the
/// criterion's sup bound pushed through the triangle inequality.
template <DiscreteGroup G>
double lab_target(Property p, const WitnessEntry& w, std::size_t depth, const WeightedSystem<G>& sys,
                  const OrliczVector<G>& f) {
  if (p == Property::Chaotic) {
    double mass = 0.0;
    for (const auto& [x, v] : f.entries()) mass += std::abs(v);
    const double delta_norm = indicator_norm_closed_form(1, sys.young);
    return w.epsilon * mass * delta_norm;
  }
  return w.epsilon * static_cast<double>(std::max<std::size_t>(depth, 1)) * luxemburg_norm(f, sys.young);
}

template <DiscreteGroup G>
json simulate_one(const CriterionRequest<G>& req, const RunConfig& cfg, Property p, const Verdict& v, bool& ok,
                  bool& flagged) {
  const auto& sys = req.system;
  const auto f = OrliczVector<G>::indicator(req.K);
  json labs = json::array();
  if (v.outcome != Outcome::WitnessFound) {
    ok = false;
    if (p == Property::Chaotic && v.tail_bounded == false) flagged = true;
    return labs;
  }
  const std::size_t depth = p == Property::MultiplyRecurrent ? cfg.L : 1;
  for (const auto& w : v.witness) {
    const double target = cfg.lab_epsilon.value_or(lab_target(p, w, depth, sys, f));
    json entry;
    try {
      if (p == Property::Chaotic) {
        const auto [vec, rep] = chaos_periodic_vector(sys, f, w.n);
        entry = to_json(rep);
        entry["epsilon"] = target;
        entry["success"] = rep.within_bound && rep.approximation_residual < target;
      } else {
        auto rep = empirical_return(sys, f, w.n, depth, target);
        entry = to_json(rep);
      }
    } catch (const TailUnbounded& e) {
      flagged = true;
      entry = {{"kind", "periodicity"}, {"n", w.n}, {"success", false}, {"tail_unbounded", true},
               {"note", e.what()}};
    } catch (const SeparationViolated& e) {
      entry = {{"n", w.n}, {"success", false}, {"note", e.what()}};
    }
    entry["property"] = to_string(p);
    if (!entry.value("success", false)) ok = false;
    labs.push_back(entry);
  }
  return labs;
}

} // namespace detail

/// Builds witness or periodic vectors at each verdict's n values and measures
/// them. Exit 0 when every lab construction meets its target.
inline CommandResult cmd_simulate(const RunConfig& config, const CommandOptions& opt = {}) {
  const RunConfig cfg = detail::with_seed(config, opt);
  require_fields(cfg, {"group", "a", "weight", "K"}, "simulate");
  detail::Envelope env("simulate", cfg);
  CommandResult out;

  struct Outcomes {
    std::map<Property, Verdict> verdicts;
    json labs = json::array();
    std::vector<double> orbit;
    bool ok = true;
    bool flagged = false;
  };

  Outcomes res = with_group(*cfg.group, [&](const auto& grp) {
    using G = std::decay_t<decltype(grp)>;
    const auto req = build_request(grp, cfg, opt.jobs);
    Outcomes o;
    const auto f = OrliczVector<G>::indicator(req.K);
    if (cfg.L == 0 && cfg.property == "multiply_recurrent") {
      // Depth zero: v = f and the only residual is N(v - f) = 0.
      auto rep = empirical_return(req.system, f, 1, 0, cfg.lab_epsilon.value_or(cfg.epsilons.front()));
      json e = to_json(rep);
      e["property"] = "multiply_recurrent";
      o.labs.push_back(e);
      o.ok = rep.success;
    } else {
      for (Property p : detail::requested_properties(cfg)) {
        auto v = run_check(req, p);
        for (auto& e : detail::simulate_one(req, cfg, p, v, o.ok, o.flagged)) o.labs.push_back(std::move(e));
        o.verdicts.emplace(p, std::move(v));
      }
    }
    o.orbit = orbit_norm_series(req.system, f, cfg.orbit_steps);
    return o;
  });

  json jv = json::object();
  for (const auto& [p, v] : res.verdicts) jv[std::string(to_string(p))] = to_json(v);
  env["verdicts"] = jv;
  env["lab"] = res.labs;
  env["tail_unbounded"] = res.flagged;
  json series = json::array();
  out.csv = "n,value\n";
  for (std::size_t k = 0; k < res.orbit.size(); ++k) {
    series.push_back({{"n", k}, {"value", number(res.orbit[k])}});
    out.csv += std::to_string(k) + "," + detail::fmt(res.orbit[k]) + "\n";
  }
  env["series"] = series;

  const int verdict_code = res.verdicts.empty() ? kExitWitness : detail::combined_exit(res.verdicts);
  if (verdict_code == kExitObstruction) out.exit_code = kExitObstruction;
  else out.exit_code = res.ok ? kExitWitness : kExitInconclusive;
  out.summary = std::string("lab ") + (res.ok ? "passed" : "did not pass") + (res.flagged ? " (tail unbounded)" : "");
  out.report = env.finish();
  return out;
}

/// Luxemburg norm of the config's vector (or a vector file) and the modular
/// value at the returned scale.
inline CommandResult cmd_norm(const RunConfig& config, const CommandOptions& opt = {}) {
  const RunConfig cfg = detail::with_seed(config, opt);
  std::vector<std::pair<Coords, double>> pairs;
  if (opt.vector_path) pairs = load_vector_file(*opt.vector_path);
  else if (cfg.vector) pairs = *cfg.vector;
  else throw ParseError("no vector given: set 'vector' in the config or pass --vector");
  const GroupSpec gs = cfg.group.value_or(GroupSpec{});

  detail::Envelope env("norm", cfg);
  CommandResult out;
  const auto phi = build_young(cfg.young);
  const auto [norm, modular_value, support] = with_group(gs, [&](const auto& grp) {
    const auto f = build_vector(grp, pairs, "vector");
    const double n = luxemburg_norm(f, phi);
    const double m = n > 0.0 ? modular(f, phi, n) : 0.0;
    return std::tuple{n, m, f.entries().size()};
  });
  env["norm"] = {{"value", number(norm)}, {"modular_at_norm", number(modular_value)}, {"support_size", support}};
  out.summary = "norm=" + detail::fmt(norm) + " modular=" + detail::fmt(modular_value);
  out.csv = "norm,modular\n" + detail::fmt(norm) + "," + detail::fmt(modular_value) + "\n";
  out.exit_code = kExitWitness;
  out.report = env.finish();
  return out;
}

/// Delta-2 probe, Young inequality sampling, and a complementary-function
/// table on a uniform y grid.
inline CommandResult cmd_probe_young(const RunConfig& config, const CommandOptions& opt = {}) {
  const RunConfig cfg = detail::with_seed(config, opt);
  detail::Envelope env("probe-young", cfg);
  CommandResult out;
  const auto phi = build_young(cfg.young);
  const auto& pr = cfg.probe;

  env["delta2"] = to_json(delta2_probe(phi, pr.t_lo, pr.t_hi, pr.n_grid));
  const double defect = convexity_defect(phi, pr.t_lo, pr.t_hi, pr.n_grid);
  env["convexity"] = {{"min_second_difference", number(defect)}, {"convex_on_grid", defect >= -1e-9}};
  env["young_inequality"] = {{"samples", pr.samples},
                             {"seed", cfg.seed},
                             {"max_violation", number(young_inequality_check(phi, pr.samples, cfg.seed))}};
  json table = json::array();
  out.csv = "y,psi\n";
  for (std::size_t i = 0; i < pr.table_rows; ++i) {
    const double y = pr.y_max * static_cast<double>(i) / static_cast<double>(pr.table_rows - 1);
    const double psi = complementary(phi, y);
    table.push_back({{"y", y}, {"psi", number(psi)}});
    out.csv += detail::fmt(y) + "," + detail::fmt(psi) + "\n";
  }
  env["conjugate_table"] = table;
  out.summary = "delta2_ratio_sup=" + detail::fmt(env["delta2"]["ratio_sup"].is_null()
                                                        ? std::numeric_limits<double>::infinity()
                                                        : env["delta2"]["ratio_sup"].get<double>());
  out.exit_code = kExitWitness;
  out.report = env.finish();
  return out;
}

} // namespace orliczdyn
