#pragma once

// Run configuration: JSON ingestion with field diagnostics, canonical
// emission, and construction of the typed objects for a concrete group.

#include "orliczdyn/criteria.hpp"
#include "orliczdyn/errors.hpp"
#include "orliczdyn/group.hpp"
#include "orliczdyn/weighted.hpp"
#include "orliczdyn/young.hpp"

#include "json.hpp"

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace orliczdyn {

inline constexpr int kSchemaVersion = 1;

using Coords = std::vector<integer>;

struct GroupSpec {
  std::string kind = "Z";  ///< Z | Zd | heisenberg | cyclic
  std::size_t d = 1;
  integer m = 1;
  bool operator==(const GroupSpec&) const = default;
};

struct WeightSpec {
  std::string family = "constant";  ///< constant | two_sided_step | heisenberg_paper | table
  double c = 1.0;
  double c_neg = 1.0;
  double c_pos = 1.0;
  std::vector<std::pair<Coords, double>> entries;
  double fallback = 1.0;
  bool operator==(const WeightSpec&) const = default;
};

struct YoungSpec {
  std::string family = "power";  ///< power | alphalog | custom
  double p = 2.0;
  double alpha = 1.5;
  std::vector<std::pair<double, double>> table;
  bool operator==(const YoungSpec&) const = default;
};

struct KSpec {
  std::optional<std::pair<Coords, Coords>> box;
  std::vector<Coords> elements;
  bool operator==(const KSpec&) const = default;
};

struct ProbeSpec {
  double t_lo = 1e-3;
  double t_hi = 1e3;
  std::size_t n_grid = 200;
  double y_max = 10.0;
  std::size_t table_rows = 101;
  std::size_t samples = 1000;
  bool operator==(const ProbeSpec&) const = default;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::optional<GroupSpec> group;
  std::optional<Coords> a;
  std::optional<WeightSpec> weight;
  YoungSpec young;
  std::optional<KSpec> K;
  std::string property = "multiply_recurrent";  ///< a Property name or "all"
  std::size_t L = 1;
  std::vector<double> epsilons = default_epsilon_schedule();
  std::size_t n_max = 256;
  std::size_t l_max = 64;
  std::optional<double> lab_epsilon;
  std::size_t orbit_steps = 32;
  std::optional<std::vector<std::pair<Coords, double>>> vector;
  ProbeSpec probe;
  std::string output;
  std::uint64_t seed = 0;

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

using json = nlohmann::json;

inline std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

[[noreturn]] inline void field_error(const std::string& path, const std::string& what) {
  throw ConfigError("field '" + path + "': " + what);
}

inline void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> known) {
  std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, val] : obj.items()) {
    if (!allowed.contains(key)) field_error(join(path, key), "unknown field");
  }
}

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) field_error(join(path, key), "required field is missing");
  return obj.at(key);
}

inline const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) field_error(path, "expected an object");
  return j;
}

inline double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) field_error(path, "expected a number");
  return j.get<double>();
}

inline double as_positive(const json& j, const std::string& path) {
  const double v = as_number(j, path);
  if (!(v > 0.0) || !std::isfinite(v)) field_error(path, "must be a positive finite number");
  return v;
}

inline integer as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) field_error(path, "expected an integer");
  return j.get<integer>();
}

inline std::size_t as_count(const json& j, const std::string& path, std::size_t min = 1) {
  if (!j.is_number_integer()) field_error(path, "expected an integer");
  const auto v = j.get<integer>();
  if (v < static_cast<integer>(min)) field_error(path, "must be >= " + std::to_string(min));
  return static_cast<std::size_t>(v);
}

inline std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) field_error(path, "expected a string");
  return j.get<std::string>();
}

/// Elements are integer arrays; a bare integer is accepted for rank-1 groups.
inline Coords as_coords(const json& j, const std::string& path) {
  if (j.is_number_integer()) return {j.get<integer>()};
  if (!j.is_array()) field_error(path, "expected an integer array");
  Coords c;
  for (std::size_t i = 0; i < j.size(); ++i) c.push_back(as_integer(j[i], path + "[" + std::to_string(i) + "]"));
  return c;
}

inline std::vector<std::pair<Coords, double>> as_pairs(const json& j, const std::string& path) {
  if (!j.is_array()) field_error(path, "expected an array of [element, value] pairs");
  std::vector<std::pair<Coords, double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const auto& e = j[i];
    if (e.is_array() && e.size() == 2) {
      out.emplace_back(as_coords(e[0], p + "[0]"), as_number(e[1], p + "[1]"));
    } else if (e.is_object()) {
      out.emplace_back(as_coords(require(e, "element", p), p + ".element"), as_number(require(e, "value", p), p + ".value"));
    } else {
      field_error(p, "expected [element, value]");
    }
  }
  return out;
}

inline GroupSpec parse_group(const json& j, const std::string& path) {
  require_object(j, path);
  GroupSpec g;
  g.kind = as_string(require(j, "kind", path), join(path, "kind"));
  if (g.kind == "Z" || g.kind == "heisenberg") {
    reject_unknown(j, path, {"kind"});
  } else if (g.kind == "Zd") {
    reject_unknown(j, path, {"kind", "d"});
    g.d = as_count(require(j, "d", path), join(path, "d"));
  } else if (g.kind == "cyclic") {
    reject_unknown(j, path, {"kind", "m"});
    g.m = static_cast<integer>(as_count(require(j, "m", path), join(path, "m")));
  } else {
    field_error(join(path, "kind"), "unknown group kind '" + g.kind + "'");
  }
  return g;
}

inline WeightSpec parse_weight(const json& j, const std::string& path) {
  require_object(j, path);
  WeightSpec w;
  w.family = as_string(require(j, "family", path), join(path, "family"));
  if (w.family == "constant") {
    reject_unknown(j, path, {"family", "c"});
    w.c = as_positive(require(j, "c", path), join(path, "c"));
  } else if (w.family == "two_sided_step") {
    reject_unknown(j, path, {"family", "c_neg", "c_pos"});
    w.c_neg = as_positive(require(j, "c_neg", path), join(path, "c_neg"));
    w.c_pos = as_positive(require(j, "c_pos", path), join(path, "c_pos"));
  } else if (w.family == "heisenberg_paper") {
    reject_unknown(j, path, {"family"});
  } else if (w.family == "table") {
    reject_unknown(j, path, {"family", "entries", "default"});
    w.entries = as_pairs(require(j, "entries", path), join(path, "entries"));
    for (std::size_t i = 0; i < w.entries.size(); ++i) {
      if (!(w.entries[i].second > 0.0)) field_error(join(path, "entries") + "[" + std::to_string(i) + "]", "weight must be positive");
    }
    w.fallback = j.contains("default") ? as_positive(j.at("default"), join(path, "default")) : 1.0;
  } else {
    field_error(join(path, "family"), "unknown weight family '" + w.family + "'");
  }
  return w;
}

inline YoungSpec parse_young(const json& j, const std::string& path) {
  require_object(j, path);
  YoungSpec y;
  y.family = as_string(require(j, "family", path), join(path, "family"));
  if (y.family == "power") {
    reject_unknown(j, path, {"family", "p"});
    y.p = as_number(require(j, "p", path), join(path, "p"));
    if (!(y.p >= 1.0)) field_error(join(path, "p"), "must be >= 1");
  } else if (y.family == "alphalog") {
    reject_unknown(j, path, {"family", "alpha"});
    y.alpha = as_number(require(j, "alpha", path), join(path, "alpha"));
    if (!(y.alpha > 1.0)) field_error(join(path, "alpha"), "must be > 1");
  } else if (y.family == "custom") {
    reject_unknown(j, path, {"family", "table"});
    const auto& t = require(j, "table", path);
    if (!t.is_array()) field_error(join(path, "table"), "expected an array of [t, phi] pairs");
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string p = join(path, "table") + "[" + std::to_string(i) + "]";
      if (!t[i].is_array() || t[i].size() != 2) field_error(p, "expected [t, phi]");
      y.table.emplace_back(as_number(t[i][0], p + "[0]"), as_number(t[i][1], p + "[1]"));
    }
    try {
      (void)YoungFunction::custom(y.table);
    } catch (const InvalidArgument& e) {
      field_error(join(path, "table"), e.what());
    }
  } else {
    field_error(join(path, "family"), "unknown Young family '" + y.family + "'");
  }
  return y;
}

inline KSpec parse_K(const json& j, const std::string& path) {
  KSpec k;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) k.elements.push_back(as_coords(j[i], path + "[" + std::to_string(i) + "]"));
  } else if (j.is_object() && j.contains("box")) {
    reject_unknown(j, path, {"box"});
    const auto& b = require_object(j.at("box"), join(path, "box"));
    reject_unknown(b, join(path, "box"), {"lo", "hi"});
    k.box = std::pair{as_coords(require(b, "lo", join(path, "box")), join(path, "box.lo")),
                      as_coords(require(b, "hi", join(path, "box")), join(path, "box.hi"))};
    if (k.box->first.size() != k.box->second.size()) field_error(join(path, "box"), "lo and hi differ in length");
  } else if (j.is_object() && j.contains("elements")) {
    reject_unknown(j, path, {"elements"});
    const auto& e = j.at("elements");
    if (!e.is_array()) field_error(join(path, "elements"), "expected an array of elements");
    for (std::size_t i = 0; i < e.size(); ++i) {
      k.elements.push_back(as_coords(e[i], join(path, "elements") + "[" + std::to_string(i) + "]"));
    }
  } else {
    field_error(path, "expected {\"box\":{lo,hi}}, {\"elements\":[...]} or an element array");
  }
  if (!k.box && k.elements.empty()) field_error(path, "K must be nonempty");
  return k;
}

inline ProbeSpec parse_probe(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"t_lo", "t_hi", "n_grid", "y_max", "table_rows", "samples"});
  ProbeSpec p;
  if (j.contains("t_lo")) p.t_lo = as_positive(j.at("t_lo"), join(path, "t_lo"));
  if (j.contains("t_hi")) p.t_hi = as_positive(j.at("t_hi"), join(path, "t_hi"));
  if (!(p.t_hi > p.t_lo)) field_error(join(path, "t_hi"), "must exceed t_lo");
  if (j.contains("n_grid")) p.n_grid = as_count(j.at("n_grid"), join(path, "n_grid"), 2);
  if (j.contains("y_max")) p.y_max = as_positive(j.at("y_max"), join(path, "y_max"));
  if (j.contains("table_rows")) p.table_rows = as_count(j.at("table_rows"), join(path, "table_rows"), 2);
  if (j.contains("samples")) p.samples = as_count(j.at("samples"), join(path, "samples"));
  return p;
}

inline json coords_json(const Coords& c) { return json(c); }

inline json pairs_json(const std::vector<std::pair<Coords, double>>& pairs) {
  json out = json::array();
  for (const auto& [c, v] : pairs) out.push_back(json::array({coords_json(c), v}));
  return out;
}

} // namespace detail

/// Parses a config object. Throws ConfigError naming the offending field.
inline RunConfig parse_config(const nlohmann::json& j) {
  using namespace detail;
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  reject_unknown(j, "", {"schema_version", "group", "a", "weight", "young", "K", "property", "L", "epsilons",
                         "epsilon_schedule", "N_max", "L_max", "lab_epsilon", "orbit_steps", "vector", "probe",
                         "output", "seed"});
  RunConfig c;
  if (j.contains("schema_version")) {
    c.schema_version = static_cast<int>(as_integer(j.at("schema_version"), "schema_version"));
    if (c.schema_version != kSchemaVersion) field_error("schema_version", "unsupported schema version");
  }
  if (j.contains("group")) c.group = parse_group(j.at("group"), "group");
  if (j.contains("a")) c.a = as_coords(j.at("a"), "a");
  if (j.contains("weight")) c.weight = parse_weight(j.at("weight"), "weight");
  if (j.contains("young")) c.young = parse_young(j.at("young"), "young");
  if (j.contains("K")) c.K = parse_K(j.at("K"), "K");
  if (j.contains("property")) {
    c.property = as_string(j.at("property"), "property");
    if (c.property != "all" && !property_from_string(c.property)) field_error("property", "unknown property '" + c.property + "'");
  }
  if (j.contains("L")) c.L = as_count(j.at("L"), "L", 0);
  if (j.contains("epsilons") && j.contains("epsilon_schedule")) {
    field_error("epsilons", "give either epsilons or epsilon_schedule, not both");
  }
  if (j.contains("epsilons")) {
    const auto& e = j.at("epsilons");
    if (!e.is_array() || e.empty()) field_error("epsilons", "expected a nonempty array");
    c.epsilons.clear();
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::string p = "epsilons[" + std::to_string(i) + "]";
      const double v = as_number(e[i], p);
      if (!(v > 0.0 && v < 1.0)) field_error(p, "must lie in (0, 1)");
      c.epsilons.push_back(v);
    }
  }
  if (j.contains("epsilon_schedule")) {
    const auto& s = require_object(j.at("epsilon_schedule"), "epsilon_schedule");
    reject_unknown(s, "epsilon_schedule", {"k_max"});
    c.epsilons = default_epsilon_schedule(as_count(require(s, "k_max", "epsilon_schedule"), "epsilon_schedule.k_max"));
  }
  if (j.contains("N_max")) c.n_max = as_count(j.at("N_max"), "N_max");
  if (j.contains("L_max")) c.l_max = as_count(j.at("L_max"), "L_max");
  if (j.contains("lab_epsilon")) c.lab_epsilon = as_positive(j.at("lab_epsilon"), "lab_epsilon");
  if (j.contains("orbit_steps")) c.orbit_steps = as_count(j.at("orbit_steps"), "orbit_steps");
  if (j.contains("vector")) c.vector = as_pairs(j.at("vector"), "vector");
  if (j.contains("probe")) c.probe = parse_probe(j.at("probe"), "probe");
  if (j.contains("output")) c.output = as_string(j.at("output"), "output");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) field_error("seed", "expected a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  return c;
}

/// Parses config text; syntax errors report line and column.
inline RunConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                      e.what());
  }
  return parse_config(j);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

/// Canonical form: every field explicit, epsilons as a list.
inline nlohmann::json emit_config(const RunConfig& c) {
  using detail::json;
  json j;
  j["schema_version"] = c.schema_version;
  if (c.group) {
    json g{{"kind", c.group->kind}};
    if (c.group->kind == "Zd") g["d"] = c.group->d;
    if (c.group->kind == "cyclic") g["m"] = c.group->m;
    j["group"] = g;
  }
  if (c.a) j["a"] = detail::coords_json(*c.a);
  if (c.weight) {
    const auto& w = *c.weight;
    json o{{"family", w.family}};
    if (w.family == "constant") o["c"] = w.c;
    if (w.family == "two_sided_step") {
      o["c_neg"] = w.c_neg;
      o["c_pos"] = w.c_pos;
    }
    if (w.family == "table") {
      o["entries"] = detail::pairs_json(w.entries);
      o["default"] = w.fallback;
    }
    j["weight"] = o;
  }
  {
    json y{{"family", c.young.family}};
    if (c.young.family == "power") y["p"] = c.young.p;
    if (c.young.family == "alphalog") y["alpha"] = c.young.alpha;
    if (c.young.family == "custom") {
      json t = json::array();
      for (const auto& [a, b] : c.young.table) t.push_back(json::array({a, b}));
      y["table"] = t;
    }
    j["young"] = y;
  }
  if (c.K) {
    if (c.K->box) {
      j["K"] = {{"box", {{"lo", c.K->box->first}, {"hi", c.K->box->second}}}};
    } else {
      j["K"] = {{"elements", c.K->elements}};
    }
  }
  j["property"] = c.property;
  j["L"] = c.L;
  j["epsilons"] = c.epsilons;
  j["N_max"] = c.n_max;
  j["L_max"] = c.l_max;
  if (c.lab_epsilon) j["lab_epsilon"] = *c.lab_epsilon;
  j["orbit_steps"] = c.orbit_steps;
  if (c.vector) j["vector"] = detail::pairs_json(*c.vector);
  j["probe"] = {{"t_lo", c.probe.t_lo}, {"t_hi", c.probe.t_hi}, {"n_grid", c.probe.n_grid},
                {"y_max", c.probe.y_max}, {"table_rows", c.probe.table_rows}, {"samples", c.probe.samples}};
  j["output"] = c.output;
  j["seed"] = c.seed;
  return j;
}

// ---------------------------------------------------------------------------
// Typed construction for a concrete group.

template <class F>
decltype(auto) with_group(const GroupSpec& spec, F&& fn) {
  if (spec.kind == "Z") return fn(Integers{});
  if (spec.kind == "Zd") return fn(Lattice{spec.d});
  if (spec.kind == "heisenberg") return fn(Heisenberg{});
  if (spec.kind == "cyclic") return fn(Cyclic{spec.m});
  throw ConfigError("field 'group.kind': unknown group kind '" + spec.kind + "'");
}

inline YoungFunction build_young(const YoungSpec& y) {
  if (y.family == "power") return YoungFunction::power(y.p);
  if (y.family == "alphalog") return YoungFunction::alpha_log(y.alpha);
  return YoungFunction::custom(y.table);
}

template <DiscreteGroup G>
element_t<G> build_element(const G& grp, const Coords& c, const std::string& path) {
  try {
    return grp.from_coords(c);
  } catch (const InvalidArgument& e) {
    detail::field_error(path, e.what());
  }
}

template <DiscreteGroup G>
Weight<G> build_weight(const G& grp, const WeightSpec& w) {
  try {
    if (w.family == "constant") return Weight<G>(ConstantWeight{w.c});
    if (w.family == "two_sided_step") return Weight<G>(TwoSidedStepWeight{w.c_neg, w.c_pos});
    if (w.family == "heisenberg_paper") return Weight<G>(HeisenbergPaperWeight{});
    TableWeight<G> t;
    t.fallback = w.fallback;
    for (std::size_t i = 0; i < w.entries.size(); ++i) {
      t.entries[build_element(grp, w.entries[i].first, "weight.entries[" + std::to_string(i) + "][0]")] =
          w.entries[i].second;
    }
    return Weight<G>(std::move(t));
  } catch (const InvalidArgument& e) {
    detail::field_error("weight", e.what());
  }
}

template <DiscreteGroup G>
CompactSet<G> build_K(const G& grp, const KSpec& k) {
  if (k.box) {
    try {
      auto K = CompactSet<G>::box(grp, k.box->first, k.box->second);
      if (K.empty()) detail::field_error("K.box", "box is empty");
      return K;
    } catch (const InvalidArgument& e) {
      detail::field_error("K.box", e.what());
    }
  }
  std::vector<element_t<G>> elems;
  for (std::size_t i = 0; i < k.elements.size(); ++i) {
    elems.push_back(build_element(grp, k.elements[i], "K.elements[" + std::to_string(i) + "]"));
  }
  return CompactSet<G>(std::move(elems));
}

template <DiscreteGroup G>
OrliczVector<G> build_vector(const G& grp, const std::vector<std::pair<Coords, double>>& pairs,
                             const std::string& path) {
  typename OrliczVector<G>::storage_type s;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    s[build_element(grp, pairs[i].first, path + "[" + std::to_string(i) + "][0]")] += pairs[i].second;
  }
  return OrliczVector<G>(std::move(s));
}

inline void require_fields(const RunConfig& c, std::initializer_list<const char*> names, std::string_view command) {
  for (std::string_view n : names) {
    const bool present = (n == "group" && c.group) || (n == "a" && c.a) || (n == "weight" && c.weight) ||
                         (n == "K" && c.K);
    if (!present) detail::field_error(std::string(n), "required by '" + std::string(command) + "'");
  }
}

template <DiscreteGroup G>
WeightedSystem<G> build_system(const G& grp, const RunConfig& c) {
  return {grp, build_element(grp, *c.a, "a"), build_weight(grp, *c.weight), build_young(c.young)};
}

template <DiscreteGroup G>
CriterionRequest<G> build_request(const G& grp, const RunConfig& c, unsigned jobs) {
  CriterionRequest<G> req{build_system(grp, c), build_K(grp, *c.K)};
  req.depth = std::max<std::size_t>(c.L, 1);
  req.epsilons = c.epsilons;
  req.n_max = c.n_max;
  req.l_max = c.l_max;
  if (auto p = property_from_string(c.property)) req.property = *p;
  req.jobs = jobs;
  return req;
}

} // namespace orliczdyn
