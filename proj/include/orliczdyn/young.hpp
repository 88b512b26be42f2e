#pragma once

// Young functions: evaluation, generalized inverse, numeric complementary
// function, Young-inequality and Delta_2 probes.

#include "orliczdyn/errors.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <variant>
#include <vector>

namespace orliczdyn {

/// Phi(t) = |t|^p / p, p >= 1.
struct PowerYoung {
  double p = 2.0;
  bool operator==(const PowerYoung&) const = default;
};

/// Phi(t) = |t|^alpha (1 + |log|t||), alpha > 1.
struct AlphaLogYoung {
  double alpha = 1.5;
  bool operator==(const AlphaLogYoung&) const = default;
};

/// Piecewise-linear interpolation of a convex sample table on [0, T].
struct CustomYoung {
  std::vector<std::pair<double, double>> table;
  bool operator==(const CustomYoung&) const = default;
};

class YoungFunction {
public:
  using Family = std::variant<PowerYoung, AlphaLogYoung, CustomYoung>;

  explicit YoungFunction(Family family) : family_(std::move(family)) { validate(); }

  static YoungFunction power(double p) { return YoungFunction(PowerYoung{p}); }
  static YoungFunction alpha_log(double alpha) { return YoungFunction(AlphaLogYoung{alpha}); }
  static YoungFunction custom(std::vector<std::pair<double, double>> table) {
    return YoungFunction(CustomYoung{std::move(table)});
  }

  const Family& family() const { return family_; }

  /// Right end of the domain on t >= 0 (+inf for the closed-form families).
  double domain_end() const {
    if (const auto* c = std::get_if<CustomYoung>(&family_)) return c->table.back().first;
    return std::numeric_limits<double>::infinity();
  }

  double operator()(double t) const {
    const double x = std::abs(t);
    return std::visit([x](const auto& f) { return eval(f, x); }, family_);
  }

  bool operator==(const YoungFunction&) const = default;

private:
  static double eval(const PowerYoung& f, double x) {
    if (f.p == 1.0) return x;
    if (f.p == 2.0) return x * x / 2.0;
    return std::pow(x, f.p) / f.p;
  }

  static double eval(const AlphaLogYoung& f, double x) {
    if (x == 0.0) return 0.0;
    return std::pow(x, f.alpha) * (1.0 + std::abs(std::log(x)));
  }

  static double eval(const CustomYoung& f, double x) {
    const auto& tab = f.table;
    if (x > tab.back().first) throw OutOfRange("custom Young function evaluated beyond its table");
    auto hi = std::lower_bound(tab.begin(), tab.end(), x,
                               [](const auto& pt, double v) { return pt.first < v; });
    if (hi->first == x) return hi->second;
    auto lo = std::prev(hi);
    const double s = (x - lo->first) / (hi->first - lo->first);
    return lo->second + s * (hi->second - lo->second);
  }

  void validate() const {
    if (const auto* p = std::get_if<PowerYoung>(&family_)) {
      if (!(p->p >= 1.0) || !std::isfinite(p->p)) throw InvalidArgument("power Young function needs p >= 1");
    } else if (const auto* a = std::get_if<AlphaLogYoung>(&family_)) {
      if (!(a->alpha > 1.0) || !std::isfinite(a->alpha)) {
        throw InvalidArgument("alpha-log Young function needs alpha > 1");
      }
    } else {
      validate_table(std::get<CustomYoung>(family_).table);
    }
  }

  // First point (0,0), strictly increasing abscissae, positive values, slopes
  // nondecreasing to 1e-12, and Phi(T) >= 1 so unit-modular scales exist.
  static void validate_table(const std::vector<std::pair<double, double>>& tab) {
    if (tab.size() < 2) throw InvalidArgument("custom table needs at least two points");
    if (tab.front().first != 0.0 || tab.front().second != 0.0) {
      throw InvalidArgument("custom table must start at (0, 0)");
    }
    double prev_slope = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < tab.size(); ++i) {
      const auto [t0, v0] = tab[i - 1];
      const auto [t1, v1] = tab[i];
      if (!std::isfinite(t1) || !std::isfinite(v1)) throw InvalidArgument("custom table has non-finite entries");
      if (!(t1 > t0)) throw InvalidArgument("custom table abscissae must increase strictly");
      if (!(v1 > 0.0)) throw InvalidArgument("custom table values must be positive for t > 0");
      const double slope = (v1 - v0) / (t1 - t0);
      if (slope < prev_slope - 1e-12) throw InvalidArgument("custom table is not convex");
      prev_slope = slope;
    }
    if (tab.back().second < 1.0) throw InvalidArgument("custom table must reach Phi >= 1");
  }

  Family family_;
};

inline double evaluate(const YoungFunction& phi, double t) { return phi(t); }

namespace detail {

/// Phi on [0, inf), with +inf past the end of a finite table.
inline double saturating(const YoungFunction& phi, double t) {
  return t > phi.domain_end() ? std::numeric_limits<double>::infinity() : phi(t);
}

inline auto relative_tolerance(double rel) {
  return [rel](double lo, double hi) { return std::abs(hi - lo) <= rel * std::abs(hi); };
}

} // namespace detail

/// Generalized inverse inf{t >= 0 : Phi(t) >= s}, to relative tolerance 1e-12.
inline double inverse(const YoungFunction& phi, double s) {
  if (!(s >= 0.0)) throw InvalidArgument("inverse needs s >= 0");
  if (s == 0.0) return 0.0;
  if (std::isinf(s)) return std::numeric_limits<double>::infinity();

  const double end = phi.domain_end();
  if (std::isfinite(end) && phi(end) < s) throw OutOfRange("custom Young function never reaches s");

  auto excess = [&](double t) { return detail::saturating(phi, t) - s; };
  double hi = std::min(1.0, end);
  while (excess(hi) < 0.0) hi = std::min(2.0 * hi, end);
  double lo = hi / 2.0;
  while (lo > 0.0 && excess(lo) >= 0.0) {
    hi = lo;
    lo /= 2.0;
  }
  if (lo == 0.0) return hi;

  std::uintmax_t max_iter = 400;
  auto [a, b] = boost::math::tools::bisect(excess, lo, hi, detail::relative_tolerance(1e-12), max_iter);
  return excess(a) >= 0.0 ? a : b;
}

/// sup_{0 <= x <= cap} (x |y| - phi(x)) for phi increasing with phi(0) = 0.
/// The bracket grows by doubling while the objective grows; a grid scan of
/// the bracket then picks the cell Brent refines, so a non-convex stretch of
/// phi cannot trap the search in a local maximum. When the objective still
/// increases at `cap` the result is +inf, unless `cap_is_boundary` says phi
/// is infinite past cap, in which case the value at cap is the supremum.
template <class Phi>
double convex_conjugate(Phi&& phi, double y, double cap = 1e12, bool cap_is_boundary = false) {
  const double slope = std::abs(y);
  if (slope == 0.0) return 0.0;
  auto objective = [&](double x) { return x * slope - phi(x); };

  double cur = std::min(1.0, cap);
  double f_cur = objective(cur);
  while (true) {
    const double next = std::min(2.0 * cur, cap);
    if (next == cur) {
      if (objective(cap) > objective(cap * (1.0 - 1e-9))) {
        return cap_is_boundary ? std::max(0.0, objective(cap)) : std::numeric_limits<double>::infinity();
      }
      break;
    }
    const double f_next = objective(next);
    if (!(f_next > f_cur)) break;
    cur = next;
    f_cur = f_next;
  }
  const double right = std::min(2.0 * cur, cap);

  constexpr int kScan = 1024;
  int best_i = 0;
  double best = 0.0;
  for (int i = 1; i <= kScan; ++i) {
    const double f = objective(right * i / kScan);
    if (f > best) {
      best = f;
      best_i = i;
    }
  }
  const double lo = right * std::max(best_i - 1, 0) / kScan;
  const double hi = right * std::min(best_i + 1, kScan) / kScan;
  auto negated = [&](double x) { return -objective(x); };
  const auto [x_best, f_best] =
      boost::math::tools::brent_find_minima(negated, lo, hi, std::numeric_limits<double>::digits / 2);
  (void)x_best;
  return std::max({0.0, -f_best, best});
}

/// Complementary function Psi(y) = sup{x|y| - Phi(x) : x >= 0}. A custom
/// table is treated as infinite past its last abscissa.
inline double complementary(const YoungFunction& phi, double y) {
  const double end = phi.domain_end();
  const bool bounded = std::isfinite(end);
  return convex_conjugate([&phi](double x) { return phi(x); }, y, bounded ? end : 1e12, bounded);
}

/// Smallest second difference Phi(t-h) - 2 Phi(t) + Phi(t+h), relative to
/// the local scale, over a log grid on [t_lo, t_hi]. Negative values mean
/// Phi is not convex there.
inline double convexity_defect(const YoungFunction& phi, double t_lo, double t_hi, std::size_t n_grid) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo) || n_grid < 2) throw InvalidArgument("convexity_defect needs 0 < t_lo < t_hi");
  const double end = phi.domain_end();
  const double step = (std::log(t_hi) - std::log(t_lo)) / static_cast<double>(n_grid - 1);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_grid; ++i) {
    const double t = std::exp(std::log(t_lo) + step * static_cast<double>(i));
    const double h = 1e-3 * t;
    if (t + h > end) break;
    const double scale = phi(t) + 1e-300;
    worst = std::min(worst, (phi(t - h) - 2.0 * phi(t) + phi(t + h)) / scale);
  }
  return worst;
}

/// Largest xy - Phi(x) - Psi(y) over random (x, y) in [0, x_max] x [0, y_max],
/// skipping points where Psi is infinite. Non-positive means no violation.
inline double young_inequality_check(const YoungFunction& phi, std::size_t samples,
                                     std::uint64_t seed = 0, double x_max = 10.0,
                                     double y_max = 10.0) {
  if (samples < 1) throw InvalidArgument("young_inequality_check needs samples >= 1");
  std::mt19937_64 rng(seed);
  const double x_hi = std::min(x_max, phi.domain_end());
  std::uniform_real_distribution<double> xs(0.0, x_hi);
  std::uniform_real_distribution<double> ys(0.0, y_max);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = xs(rng);
    const double y = ys(rng);
    const double psi = complementary(phi, y);
    if (std::isinf(psi)) continue;
    worst = std::max(worst, x * y - phi(x) - psi);
  }
  return worst;
}

struct Delta2Report {
  double ratio_sup = 0.0;   ///< sup Phi(2t)/Phi(t) over the grid
  double argmax_t = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::size_t n_grid = 0;
  std::size_t skipped = 0;  ///< grid points where 2t leaves a custom table
  bool evidence_only = true;

  bool operator==(const Delta2Report&) const = default;
};

/// Numeric Delta_2 evidence on a log-spaced grid. Not a proof.
inline Delta2Report delta2_probe(const YoungFunction& phi, double t_lo, double t_hi,
                                 std::size_t n_grid) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw InvalidArgument("delta2_probe needs 0 < t_lo < t_hi");
  if (n_grid < 2) throw InvalidArgument("delta2_probe needs n_grid >= 2");
  Delta2Report report{.t_lo = t_lo, .t_hi = t_hi, .n_grid = n_grid};
  const double log_lo = std::log(t_lo);
  const double step = (std::log(t_hi) - log_lo) / static_cast<double>(n_grid - 1);
  for (std::size_t i = 0; i < n_grid; ++i) {
    const double t = i + 1 == n_grid ? t_hi : std::exp(log_lo + step * static_cast<double>(i));
    if (2.0 * t > phi.domain_end()) {
      ++report.skipped;
      continue;
    }
    const double base = phi(t);
    if (base <= 0.0) continue;
    const double ratio = phi(2.0 * t) / base;
    if (ratio > report.ratio_sup) {
      report.ratio_sup = ratio;
      report.argmax_t = t;
    }
  }
  return report;
}

} // namespace orliczdyn
