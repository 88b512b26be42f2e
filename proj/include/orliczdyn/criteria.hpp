#pragma once

// Semi-decision checkers for recurrence, multiple recurrence, transitivity,
// mixing and chaos of a weighted translation, evaluated on one finite set K.
//
// With counting measure the exceptional sets E_k of the characterizations
// must eventually equal K, so every checker takes sup over all of K. A
// witness is a finite search result; absence of a witness is reported as
// Inconclusive unless an analytic obstruction applies.

#include "orliczdyn/group.hpp"
#include "orliczdyn/parallel.hpp"
#include "orliczdyn/weighted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace orliczdyn {

enum class Property { Recurrent, MultiplyRecurrent, Transitive, Mixing, Chaotic };

inline constexpr Property kAllProperties[] = {Property::Recurrent, Property::MultiplyRecurrent,
                                              Property::Transitive, Property::Mixing,
                                              Property::Chaotic};

inline std::string_view to_string(Property p) {
  switch (p) {
  case Property::Recurrent: return "recurrent";
  case Property::MultiplyRecurrent: return "multiply_recurrent";
  case Property::Transitive: return "transitive";
  case Property::Mixing: return "mixing";
  case Property::Chaotic: return "chaotic";
  }
  return "unknown";
}

inline std::optional<Property> property_from_string(std::string_view s) {
  for (Property p : kAllProperties) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

enum class Outcome { WitnessFound, ObstructionFound, Inconclusive };

inline std::string_view to_string(Outcome o) {
  switch (o) {
  case Outcome::WitnessFound: return "witness_found";
  case Outcome::ObstructionFound: return "obstruction_found";
  case Outcome::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

struct Obstruction {
  enum class Kind { Torsion, Contraction, Expansion };

  Kind kind = Kind::Torsion;
  /// Torsion order, declared sup w (Contraction) or declared inf w (Expansion).
  double bound = 0.0;

  bool operator==(const Obstruction&) const = default;
};

inline std::string_view to_string(Obstruction::Kind k) {
  switch (k) {
  case Obstruction::Kind::Torsion: return "torsion";
  case Obstruction::Kind::Contraction: return "contraction";
  case Obstruction::Kind::Expansion: return "expansion";
  }
  return "unknown";
}

struct WitnessEntry {
  double epsilon = 0.0;
  std::size_t n = 0;
  double sup = 0.0;              ///< the quantity compared against epsilon
  std::vector<double> sup_by_l;  ///< per-l sup over K

  bool operator==(const WitnessEntry&) const = default;
};

struct SeriesPoint {
  std::size_t n = 0;
  double sup_phi = 0.0;
  double sup_phi_tilde = 0.0;
  std::optional<double> chaos_sum;  ///< truncated sum, chaos checker only

  bool operator==(const SeriesPoint&) const = default;
};

struct Budget {
  std::size_t n_max = 0;
  std::size_t depth = 0;
  std::size_t l_max = 0;
  std::size_t candidates = 0;

  bool operator==(const Budget&) const = default;
};

struct Verdict {
  Outcome outcome = Outcome::Inconclusive;
  std::vector<WitnessEntry> witness;  ///< one entry per epsilon that found an n
  std::optional<Obstruction> obstruction;
  std::vector<SeriesPoint> series;    ///< n = 1..n_max
  Budget budget;
  std::optional<integer> separation_constant;
  std::optional<bool> tail_bounded;   ///< chaos only
  std::string note;

  bool operator==(const Verdict&) const = default;
};

/// epsilon_k = 2^{-k}, k = 1..k_max.
inline std::vector<double> default_epsilon_schedule(std::size_t k_max = 10) {
  std::vector<double> eps;
  for (std::size_t k = 1; k <= k_max; ++k) eps.push_back(std::ldexp(1.0, -static_cast<int>(k)));
  return eps;
}

template <DiscreteGroup G>
struct CriterionRequest {
  WeightedSystem<G> system;
  CompactSet<G> K;
  std::size_t depth = 1;  ///< L, the multiple-recurrence depth
  std::vector<double> epsilons = default_epsilon_schedule();
  std::size_t n_max = 256;
  std::size_t l_max = 64;  ///< chaos-series truncation
  Property property = Property::MultiplyRecurrent;
  bool override_obstructions = false;
  unsigned jobs = 1;
};

namespace detail {

template <DiscreteGroup G>
void validate(const CriterionRequest<G>& req) {
  if (req.K.empty()) throw InvalidArgument("criterion request needs a nonempty K");
  if (req.depth < 1) throw InvalidArgument("criterion request needs L >= 1");
  if (req.n_max < 1) throw InvalidArgument("criterion request needs N_max >= 1");
  if (req.l_max < 1) throw InvalidArgument("criterion request needs L_max >= 1");
  if (req.epsilons.empty()) throw InvalidArgument("criterion request needs at least one epsilon");
  for (double e : req.epsilons) {
    if (!(e > 0.0 && e < 1.0)) throw InvalidArgument("epsilon values must lie in (0, 1)");
  }
}

/// phi_j(x) and phi_tilde_j(x) for every x in K and j = 0..max_index.
struct OrbitTable {
  std::vector<std::vector<WeightProduct>> phi;
  std::vector<std::vector<WeightProduct>> phi_tilde;

  std::size_t points() const { return phi.size(); }

  double sup_phi(std::size_t j) const {
    double m = 0.0;
    for (const auto& row : phi) m = std::max(m, row[j].value);
    return m;
  }

  double sup_phi_tilde(std::size_t j) const {
    double m = 0.0;
    for (const auto& row : phi_tilde) m = std::max(m, row[j].value);
    return m;
  }

  double sup_both(std::size_t j) const { return std::max(sup_phi(j), sup_phi_tilde(j)); }
};

template <DiscreteGroup G>
OrbitTable build_orbit_table(const WeightedSystem<G>& sys, const CompactSet<G>& K, std::size_t max_index,
                             unsigned jobs) {
  const auto& pts = K.elements();
  OrbitTable t;
  t.phi.resize(pts.size());
  t.phi_tilde.resize(pts.size());
  parallel_for(pts.size(), jobs, [&](std::size_t i) {
    t.phi[i] = phi_series(sys, pts[i], max_index);
    t.phi_tilde[i] = phi_tilde_series(sys, pts[i], max_index);
  });
  return t;
}

inline std::vector<SeriesPoint> diagnostic_series(const OrbitTable& t, std::size_t n_max) {
  std::vector<SeriesPoint> s;
  s.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) s.push_back({n, t.sup_phi(n), t.sup_phi_tilde(n), std::nullopt});
  return s;
}

/// Chaos sum at one point: sum_{l=1}^{l_max} (phi_{ln} + phi_tilde_{ln}),
/// the last summed term, and the largest log ratio between consecutive terms
/// of either series (-inf when l_max = 1 leaves no ratio to estimate).
struct PointChaos {
  double truncated = 0.0;
  double last_term = 0.0;
  double log_ratio = -std::numeric_limits<double>::infinity();
};

inline PointChaos point_chaos(std::span<const WeightProduct> phi, std::span<const WeightProduct> phi_tilde,
                              std::size_t n, std::size_t l_max) {
  PointChaos pc;
  for (std::size_t l = 1; l <= l_max; ++l) {
    pc.truncated += phi[l * n].value + phi_tilde[l * n].value;
    if (l > 1) {
      pc.log_ratio = std::max({pc.log_ratio, phi[l * n].log_value - phi[(l - 1) * n].log_value,
                               phi_tilde[l * n].log_value - phi_tilde[(l - 1) * n].log_value});
    }
  }
  pc.last_term = phi[l_max * n].value + phi_tilde[l_max * n].value;
  return pc;
}

/// Geometric majorant term * r / (1 - r); nullopt when r >= 1 or unknown.
inline std::optional<double> geometric_tail(double last_term, double log_ratio, std::size_t l_max) {
  if (l_max < 2 || !(log_ratio < 0.0)) return std::nullopt;
  const double r = std::exp(log_ratio);
  return last_term * r / (1.0 - r);
}

inline std::string obstruction_note(const Obstruction& o) {
  switch (o.kind) {
  case Obstruction::Kind::Torsion: return "translation element has finite order";
  case Obstruction::Kind::Contraction: return "sup w < 1: phi_tilde_n >= 1 for every n";
  case Obstruction::Kind::Expansion: return "inf w > 1: phi_n >= 1 for every n";
  }
  return {};
}

} // namespace detail

/// Analytic obstructions: torsion translation element, or a weight bounded
/// strictly below 1 (contraction) or strictly above 1 (expansion).
template <DiscreteGroup G>
std::optional<Obstruction> check_obstructions(const CriterionRequest<G>& req) {
  const auto& sys = req.system;
  if (auto order = torsion_order(sys.group, sys.a, static_cast<integer>(std::max<std::size_t>(req.n_max, 1)))) {
    return Obstruction{Obstruction::Kind::Torsion, static_cast<double>(*order)};
  }
  if (const double s = sys.weight.sup(); s < 1.0) return Obstruction{Obstruction::Kind::Contraction, s};
  if (const double i = sys.weight.inf(); i > 1.0) return Obstruction{Obstruction::Kind::Expansion, i};
  return std::nullopt;
}

namespace detail {

template <DiscreteGroup G>
void require_no_obstruction(const CriterionRequest<G>& req) {
  if (req.override_obstructions) return;
  if (auto o = check_obstructions(req)) {
    throw ObstructionPresent("obstruction present: " + std::string(to_string(o->kind)));
  }
}

/// Separation constant for the search start, or a note explaining its absence.
template <DiscreteGroup G>
std::optional<integer> search_start(const CriterionRequest<G>& req, Verdict& v) {
  try {
    auto m = separation_constant(req.system.group, req.K, req.system.a, static_cast<integer>(req.n_max));
    if (!m) v.note = "K does not separate from K a^{+-n} within N_max";
    v.separation_constant = m;
    return m;
  } catch (const TorsionElement& e) {
    v.note = e.what();
    return std::nullopt;
  }
}

template <DiscreteGroup G>
Verdict subsequence_check(const CriterionRequest<G>& req, std::size_t depth) {
  validate(req);
  require_no_obstruction(req);
  Verdict v;
  v.budget = {req.n_max, depth, req.l_max, 0};
  const auto table = build_orbit_table(req.system, req.K, depth * req.n_max, req.jobs);
  v.series = diagnostic_series(table, req.n_max);

  const auto M = search_start(req, v);
  if (!M) return v;
  const std::size_t start = static_cast<std::size_t>(*M) + 1;
  const std::size_t count = start <= req.n_max ? req.n_max - start + 1 : 0;

  std::vector<std::vector<double>> sup_by_l(count);
  parallel_for(count, req.jobs, [&](std::size_t i) {
    const std::size_t n = start + i;
    auto& row = sup_by_l[i];
    row.resize(depth);
    for (std::size_t l = 1; l <= depth; ++l) row[l - 1] = table.sup_both(l * n);
  });

  for (double eps : req.epsilons) {
    for (std::size_t i = 0; i < count; ++i) {
      v.budget.candidates = std::max(v.budget.candidates, i + 1);
      const double s = *std::max_element(sup_by_l[i].begin(), sup_by_l[i].end());
      if (s < eps) {
        v.witness.push_back({eps, start + i, s, sup_by_l[i]});
        break;
      }
    }
  }
  v.outcome = v.witness.size() == req.epsilons.size() ? Outcome::WitnessFound : Outcome::Inconclusive;
  return v;
}

} // namespace detail

/// For each epsilon, the smallest n beyond the separation constant with
/// max_{1<=l<=L} max_{x in K} max(phi_{ln}(x), phi_tilde_{ln}(x)) < epsilon.
template <DiscreteGroup G>
Verdict multiply_recurrent_check(const CriterionRequest<G>& req) {
  return detail::subsequence_check(req, req.depth);
}

/// Same predicate with L = 1.
template <DiscreteGroup G>
Verdict recurrent_check(const CriterionRequest<G>& req) {
  return detail::subsequence_check(req, 1);
}

/// Transitivity and recurrence share one weight condition, so this returns
/// exactly what recurrent_check returns.
template <DiscreteGroup G>
Verdict transitive_check(const CriterionRequest<G>& req) {
  return detail::subsequence_check(req, 1);
}

/// Full-sequence condition: for each epsilon the smallest N0 such that
/// max_K max(phi_n, phi_tilde_n) < epsilon for every n in [N0, N_max].
template <DiscreteGroup G>
Verdict mixing_check(const CriterionRequest<G>& req) {
  detail::validate(req);
  detail::require_no_obstruction(req);
  Verdict v;
  v.budget = {req.n_max, 1, req.l_max, 0};
  const auto table = detail::build_orbit_table(req.system, req.K, req.n_max, req.jobs);
  v.series = detail::diagnostic_series(table, req.n_max);

  const auto M = detail::search_start(req, v);
  if (!M) return v;
  const std::size_t start = static_cast<std::size_t>(*M) + 1;
  if (start > req.n_max) {
    v.note = "separation constant exhausts N_max";
    return v;
  }
  v.budget.candidates = req.n_max - start + 1;

  for (double eps : req.epsilons) {
    std::optional<std::size_t> n0;
    double tail_sup = 0.0;
    for (std::size_t n = req.n_max; n >= start; --n) {
      const double s = table.sup_both(n);
      if (!(s < eps)) break;
      n0 = n;
      tail_sup = std::max(tail_sup, s);
      if (n == start) break;
    }
    if (n0) v.witness.push_back({eps, *n0, tail_sup, {table.sup_both(*n0)}});
  }
  v.outcome = v.witness.size() == req.epsilons.size() ? Outcome::WitnessFound : Outcome::Inconclusive;
  return v;
}

struct ChaosSum {
  double truncated = 0.0;  ///< sum_{l=1}^{l_max} (phi_{ln} + phi_tilde_{ln})
  double tail = 0.0;       ///< geometric majorant of the dropped terms
  bool tail_bounded = false;
  double ratio = 0.0;      ///< largest consecutive-term ratio observed

  double total() const { return truncated + tail; }
};

/// Chaos sum at a single point.
template <DiscreteGroup G>
ChaosSum chaos_sum(const WeightedSystem<G>& sys, const element_t<G>& x, std::size_t n, std::size_t l_max) {
  if (n < 1 || l_max < 1) throw InvalidArgument("chaos_sum needs n >= 1 and l_max >= 1");
  const auto phi = phi_series(sys, x, l_max * n);
  const auto phi_tilde = phi_tilde_series(sys, x, l_max * n);
  const auto pc = detail::point_chaos(phi, phi_tilde, n, l_max);
  ChaosSum out{pc.truncated, 0.0, false, std::exp(pc.log_ratio)};
  if (auto tail = detail::geometric_tail(pc.last_term, pc.log_ratio, l_max)) {
    out.tail = *tail;
    out.tail_bounded = true;
  } else {
    out.tail = std::numeric_limits<double>::infinity();
  }
  return out;
}

/// For each epsilon, the smallest n with
///   max_{x in K} [ sum_{l<=L_max} (phi_{ln}(x) + phi_tilde_{ln}(x)) + tail(x) ] < epsilon,
/// where tail(x) is the geometric majorant built from a consecutive-term
/// ratio r < 1 taken uniformly over K. Candidates without such r never count.
template <DiscreteGroup G>
Verdict chaotic_check(const CriterionRequest<G>& req) {
  detail::validate(req);
  detail::require_no_obstruction(req);
  Verdict v;
  v.budget = {req.n_max, 1, req.l_max, 0};
  const auto table = detail::build_orbit_table(req.system, req.K, req.l_max * req.n_max, req.jobs);

  struct Row {
    double truncated_sup = 0.0;
    double total_sup = std::numeric_limits<double>::infinity();
    bool tail_bounded = false;
    std::vector<double> sup_by_l;
  };
  std::vector<Row> rows(req.n_max);
  parallel_for(req.n_max, req.jobs, [&](std::size_t i) {
    const std::size_t n = i + 1;
    Row& row = rows[i];
    row.sup_by_l.assign(req.l_max, 0.0);
    std::vector<detail::PointChaos> pcs;
    pcs.reserve(table.points());
    double log_ratio = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < table.points(); ++p) {
      pcs.push_back(detail::point_chaos(table.phi[p], table.phi_tilde[p], n, req.l_max));
      log_ratio = std::max(log_ratio, pcs.back().log_ratio);
      row.truncated_sup = std::max(row.truncated_sup, pcs.back().truncated);
      for (std::size_t l = 1; l <= req.l_max; ++l) {
        row.sup_by_l[l - 1] =
            std::max(row.sup_by_l[l - 1], table.phi[p][l * n].value + table.phi_tilde[p][l * n].value);
      }
    }
    double worst = 0.0;
    for (const auto& pc : pcs) {
      auto tail = detail::geometric_tail(pc.last_term, log_ratio, req.l_max);
      if (!tail) return;
      worst = std::max(worst, pc.truncated + *tail);
    }
    row.tail_bounded = true;
    row.total_sup = worst;
  });

  v.series = detail::diagnostic_series(table, req.n_max);
  for (std::size_t i = 0; i < req.n_max; ++i) v.series[i].chaos_sum = rows[i].truncated_sup;

  const auto M = detail::search_start(req, v);
  if (!M) return v;
  const std::size_t start = static_cast<std::size_t>(*M) + 1;
  if (start > req.n_max) {
    v.note = "separation constant exhausts N_max";
    return v;
  }

  std::size_t deepest = start;
  for (double eps : req.epsilons) {
    std::size_t n = start;
    for (; n <= req.n_max; ++n) {
      const Row& row = rows[n - 1];
      if (row.tail_bounded && row.total_sup < eps) {
        v.witness.push_back({eps, n, row.total_sup, row.sup_by_l});
        break;
      }
    }
    deepest = std::max(deepest, std::min(n, req.n_max));
  }
  v.budget.candidates = deepest >= start ? deepest - start + 1 : 0;
  v.tail_bounded = deepest <= req.n_max && rows[deepest - 1].tail_bounded;
  v.outcome = v.witness.size() == req.epsilons.size() ? Outcome::WitnessFound : Outcome::Inconclusive;
  return v;
}

/// Obstruction check followed by the requested checker. Obstructed systems
/// get an ObstructionFound verdict carrying the phi / phi_tilde series.
template <DiscreteGroup G>
Verdict run_check(const CriterionRequest<G>& req, Property property) {
  if (!req.override_obstructions) {
    if (auto o = check_obstructions(req)) {
      detail::validate(req);
      Verdict v;
      v.outcome = Outcome::ObstructionFound;
      v.obstruction = o;
      v.note = detail::obstruction_note(*o);
      v.budget = {req.n_max, property == Property::MultiplyRecurrent ? req.depth : 1, req.l_max, 0};
      const auto table = detail::build_orbit_table(req.system, req.K, req.n_max, req.jobs);
      v.series = detail::diagnostic_series(table, req.n_max);
      return v;
    }
  }
  switch (property) {
  case Property::Recurrent: return recurrent_check(req);
  case Property::MultiplyRecurrent: return multiply_recurrent_check(req);
  case Property::Transitive: return transitive_check(req);
  case Property::Mixing: return mixing_check(req);
  case Property::Chaotic: return chaotic_check(req);
  }
  throw InvalidArgument("unknown property");
}

template <DiscreteGroup G>
Verdict run_check(const CriterionRequest<G>& req) {
  return run_check(req, req.property);
}

struct AuditReport {
  std::vector<std::string> findings;
  std::vector<std::string> violations;

  bool consistent() const { return violations.empty(); }
};

/// Chaos and mixing each imply multiple recurrence. Given verdicts computed
/// on one system, K and budget, checks that every chaos or mixing witness
/// yields a multiple-recurrence witness at the same (or an earlier) n.
inline AuditReport implication_audit(const std::map<Property, Verdict>& verdicts) {
  AuditReport audit;
  if (verdicts.empty()) {
    audit.findings.push_back("no verdicts supplied; trivially consistent");
    return audit;
  }
  const std::size_t n_max = verdicts.begin()->second.budget.n_max;
  for (const auto& [p, v] : verdicts) {
    if (v.budget.n_max != n_max) throw InconsistentVerdicts("verdicts computed with different N_max");
  }

  const Verdict* mr = verdicts.contains(Property::MultiplyRecurrent) ? &verdicts.at(Property::MultiplyRecurrent) : nullptr;
  const std::size_t depth = mr ? mr->budget.depth : 1;
  auto mr_witness = [&](double eps) -> const WitnessEntry* {
    if (!mr) return nullptr;
    for (const auto& w : mr->witness) {
      if (w.epsilon == eps) return &w;
    }
    return nullptr;
  };
  auto label = [](std::string_view what, const WitnessEntry& w) {
    return std::string(what) + " witness (eps=" + std::to_string(w.epsilon) + ", n=" + std::to_string(w.n) + ")";
  };

  if (auto it = verdicts.find(Property::Chaotic); it != verdicts.end() && it->second.outcome == Outcome::WitnessFound) {
    const Verdict& chaos = it->second;
    if (depth > chaos.budget.l_max) {
      audit.findings.push_back("multiple-recurrence depth exceeds chaos truncation; chaos witnesses cover l <= L_max only");
    }
    for (const auto& w : chaos.witness) {
      const std::size_t upto = std::min(depth, w.sup_by_l.size());
      const double term_sup = upto == 0 ? 0.0 : *std::max_element(w.sup_by_l.begin(), w.sup_by_l.begin() + upto);
      if (!(term_sup <= w.sup && term_sup < w.epsilon)) {
        audit.violations.push_back(label("chaos", w) + ": a single term is not dominated by the chaos sum");
        continue;
      }
      if (!mr) {
        audit.findings.push_back(label("chaos", w) + " derives a multiple-recurrence witness at n=" + std::to_string(w.n));
        continue;
      }
      const auto* m = mr_witness(w.epsilon);
      if (!m) {
        audit.violations.push_back(label("chaos", w) + ": multiple-recurrence verdict has no witness at this epsilon");
      } else if (m->n > w.n) {
        audit.violations.push_back(label("chaos", w) + ": multiple-recurrence witness n=" + std::to_string(m->n) +
                                   " exceeds the chaos witness");
      } else {
        audit.findings.push_back(label("chaos", w) + " confirmed by multiple-recurrence witness n=" + std::to_string(m->n));
      }
    }
  }

  if (auto it = verdicts.find(Property::Mixing); it != verdicts.end() && it->second.outcome == Outcome::WitnessFound) {
    const Verdict& mix = it->second;
    for (const auto& w : mix.witness) {
      if (depth * w.n > n_max) {
        audit.findings.push_back(label("mixing", w) + ": L*N0 exceeds N_max, not derivable within budget");
        continue;
      }
      double s = 0.0;
      for (std::size_t l = 1; l <= depth; ++l) {
        const auto& pt = mix.series.at(l * w.n - 1);
        s = std::max({s, pt.sup_phi, pt.sup_phi_tilde});
      }
      if (!(s < w.epsilon)) {
        audit.violations.push_back(label("mixing", w) + ": tail series exceeds epsilon inside the claimed tail");
        continue;
      }
      if (!mr) {
        audit.findings.push_back(label("mixing", w) + " derives a multiple-recurrence witness at n=" + std::to_string(w.n));
        continue;
      }
      const auto* m = mr_witness(w.epsilon);
      if (!m) {
        audit.violations.push_back(label("mixing", w) + ": multiple-recurrence verdict has no witness at this epsilon");
      } else if (m->n > w.n) {
        audit.violations.push_back(label("mixing", w) + ": multiple-recurrence witness n=" + std::to_string(m->n) +
                                   " exceeds N0");
      } else {
        audit.findings.push_back(label("mixing", w) + " confirmed by multiple-recurrence witness n=" + std::to_string(m->n));
      }
    }
  }
  return audit;
}

inline void require_consistent(const AuditReport& audit) {
  if (!audit.consistent()) throw InconsistentVerdicts(audit.violations.front());
}

} // namespace orliczdyn
