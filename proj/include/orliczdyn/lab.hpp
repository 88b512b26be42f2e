#pragma once

// Constructive side of the characterizations: witness vectors for multiple
// recurrence, truncated periodic vectors for chaos, and orbit norm series.
// Every measurement goes through the Luxemburg norm.

#include "orliczdyn/criteria.hpp"
#include "orliczdyn/orlicz.hpp"
#include "orliczdyn/weighted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>
#include <vector>

namespace orliczdyn {

struct ReturnReport {
  std::size_t n = 0;
  std::size_t depth = 0;
  double epsilon = 0.0;
  double residual_base = 0.0;        ///< N(v - f)
  std::vector<double> residuals;     ///< N(T^{ln} v - f), l = 1..L
  double bound_base = 0.0;           ///< triangle-inequality bound on residual_base
  std::vector<double> bounds;        ///< bounds on residuals
  bool success = false;

  bool operator==(const ReturnReport&) const = default;
};

struct PeriodicityReport {
  std::size_t n = 0;
  std::size_t truncation = 0;
  double defect = 0.0;                ///< N(T^n v - v)
  double predicted_bound = 0.0;       ///< N(phi_{(L+1)n} f) + N(phi_tilde_{Ln} f)
  double rounding_allowance = 0.0;
  double approximation_residual = 0.0;  ///< N(v - f)
  double ratio = 0.0;                 ///< consecutive-term ratio on supp f
  bool ill_conditioned = false;       ///< some T-side term exceeded kTermMagnitudeCap
  bool within_bound = false;

  bool operator==(const PeriodicityReport&) const = default;
};

inline constexpr double kTermMagnitudeCap = 1e12;
inline constexpr std::size_t kDefaultTruncation = 32;

namespace detail {

template <DiscreteGroup G>
void require_disjoint(const std::vector<OrliczVector<G>>& pieces) {
  std::set<element_t<G>> seen;
  for (const auto& p : pieces) {
    for (const auto& [x, v] : p.entries()) {
      if (!seen.insert(x).second) throw SeparationViolated("witness summands overlap; n is below the separation constant");
    }
  }
}

template <DiscreteGroup G>
OrliczVector<G> sum_of(const std::vector<OrliczVector<G>>& pieces) {
  typename OrliczVector<G>::storage_type s;
  for (const auto& p : pieces) {
    for (const auto& [x, v] : p.entries()) s[x] += v;
  }
  return OrliczVector<G>(std::move(s));
}

template <DiscreteGroup G>
double sup_on_support(const OrliczVector<G>& f, auto&& product) {
  double m = 0.0;
  for (const auto& [x, v] : f.entries()) m = std::max(m, product(x));
  return m;
}

} // namespace detail

/// v = f + S^n f + S^{2n} f + ... + S^{Ln} f. The L+1 summands must have
/// pairwise disjoint supports.
template <DiscreteGroup G>
OrliczVector<G> recurrence_witness_vector(const WeightedSystem<G>& sys, const OrliczVector<G>& f, std::size_t n,
                                          std::size_t depth) {
  std::vector<OrliczVector<G>> pieces{f};
  for (std::size_t l = 1; l <= depth; ++l) pieces.push_back(apply_S_n(sys, f, l * n));
  detail::require_disjoint(pieces);
  return detail::sum_of(pieces);
}

/// Builds the witness vector and measures N(v - f) and N(T^{ln} v - f).
template <DiscreteGroup G>
ReturnReport empirical_return(const WeightedSystem<G>& sys, const OrliczVector<G>& f, std::size_t n,
                              std::size_t depth, double epsilon) {
  const auto& phi = sys.young;
  const auto v = recurrence_witness_vector(sys, f, n, depth);
  ReturnReport r;
  r.n = n;
  r.depth = depth;
  r.epsilon = epsilon;
  r.residual_base = luxemburg_norm(v - f, phi);

  const double norm_f = luxemburg_norm(f, phi);
  std::vector<double> back(depth + 1, 0.0);
  std::vector<double> fwd(depth + 1, 0.0);
  for (std::size_t l = 1; l <= depth; ++l) {
    back[l] = detail::sup_on_support(f, [&](const auto& x) { return phi_tilde_product(sys, x, l * n).value; });
    fwd[l] = detail::sup_on_support(f, [&](const auto& x) { return phi_product(sys, x, l * n).value; });
  }
  for (std::size_t l = 1; l <= depth; ++l) r.bound_base += back[l] * norm_f;

  for (std::size_t l = 1; l <= depth; ++l) {
    r.residuals.push_back(luxemburg_norm(apply_T_n(sys, v, l * n) - f, phi));
    double b = 0.0;
    for (std::size_t k = 1; k <= l; ++k) b += fwd[k] * norm_f;
    for (std::size_t k = 1; k + l <= depth; ++k) b += back[k] * norm_f;
    r.bounds.push_back(b);
  }
  r.success = r.residual_base < epsilon &&
              std::all_of(r.residuals.begin(), r.residuals.end(), [&](double x) { return x < epsilon; });
  return r;
}

/// Smallest L <= 32 whose boundary terms on supp f fall below 1e-15.
template <DiscreteGroup G>
std::size_t default_truncation(const WeightedSystem<G>& sys, const OrliczVector<G>& f, std::size_t n) {
  const double scale = f.sup_abs();
  for (std::size_t L = 1; L <= kDefaultTruncation; ++L) {
    const double boundary = detail::sup_on_support(f, [&](const auto& x) {
      return std::max(phi_product(sys, x, (L + 1) * n).value, phi_tilde_product(sys, x, L * n).value);
    });
    if (boundary * scale < 1e-15) return L;
  }
  return kDefaultTruncation;
}

/// Truncated periodic vector v = f + sum_{l<=L} T^{ln} f + sum_{l<=L} S^{ln} f.
/// T^n v - v telescopes to T^{(L+1)n} f - S^{Ln} f, so the defect is bounded
/// by the norms of those two boundary terms.
template <DiscreteGroup G>
std::pair<OrliczVector<G>, PeriodicityReport> chaos_periodic_vector(const WeightedSystem<G>& sys,
                                                                    const OrliczVector<G>& f, std::size_t n,
                                                                    std::size_t truncation) {
  if (n < 1) throw InvalidArgument("chaos_periodic_vector needs n >= 1");
  const auto& phi = sys.young;
  PeriodicityReport r;
  r.n = n;
  r.truncation = truncation;

  const std::size_t probe = std::max<std::size_t>(truncation + 1, 2);
  double log_ratio = -std::numeric_limits<double>::infinity();
  for (const auto& [x, val] : f.entries()) {
    const auto ps = phi_series(sys, x, probe * n);
    const auto pts = phi_tilde_series(sys, x, probe * n);
    log_ratio = std::max(log_ratio, detail::point_chaos(ps, pts, n, probe).log_ratio);
  }
  r.ratio = std::exp(log_ratio);
  if (!f.empty() && !(log_ratio < 0.0)) {
    throw TailUnbounded("weight products do not decay geometrically along multiples of n");
  }

  std::vector<OrliczVector<G>> pieces{f};
  for (std::size_t l = 1; l <= truncation; ++l) {
    pieces.push_back(apply_T_n(sys, f, l * n));
    if (pieces.back().sup_abs() > kTermMagnitudeCap) r.ill_conditioned = true;
    pieces.push_back(apply_S_n(sys, f, l * n));
  }
  detail::require_disjoint(pieces);
  auto v = detail::sum_of(pieces);

  r.approximation_residual = luxemburg_norm(v - f, phi);
  r.defect = luxemburg_norm(apply_T_n(sys, v, n) - v, phi);
  const auto head = f.multiplied_by([&](const auto& x) { return phi_product(sys, x, (truncation + 1) * n).value; });
  const auto tail = f.multiplied_by([&](const auto& x) { return phi_tilde_product(sys, x, truncation * n).value; });
  r.predicted_bound = luxemburg_norm(head, phi) + luxemburg_norm(tail, phi);
  r.rounding_allowance = 16.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(2 * truncation + 1) *
                         luxemburg_norm(v, phi);
  r.within_bound = r.defect <= r.predicted_bound + r.rounding_allowance;
  return {std::move(v), r};
}

template <DiscreteGroup G>
std::pair<OrliczVector<G>, PeriodicityReport> chaos_periodic_vector(const WeightedSystem<G>& sys,
                                                                    const OrliczVector<G>& f, std::size_t n) {
  return chaos_periodic_vector(sys, f, n, default_truncation(sys, f, n));
}

/// N(T^k f) for k = 0..n_steps by repeated application of T.
template <DiscreteGroup G>
std::vector<double> orbit_norm_series(const WeightedSystem<G>& sys, const OrliczVector<G>& f, std::size_t n_steps) {
  if (n_steps < 1) throw InvalidArgument("orbit_norm_series needs n_steps >= 1");
  std::vector<double> out;
  out.reserve(n_steps + 1);
  auto v = f;
  out.push_back(luxemburg_norm(v, sys.young));
  for (std::size_t k = 1; k <= n_steps; ++k) {
    v = apply_T(sys, v);
    out.push_back(luxemburg_norm(v, sys.young));
  }
  return out;
}

} // namespace orliczdyn
