#pragma once

// Independent reference computations used by the test suites. Nothing here
// calls into the library's numeric code paths.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

namespace oracle {

/// Heisenberg element as the unipotent matrix [[1,x,z],[0,1,y],[0,0,1]].
using Mat3 = std::array<std::array<std::int64_t, 3>, 3>;

inline Mat3 heis_matrix(std::int64_t x, std::int64_t y, std::int64_t z) {
  return {{{1, x, z}, {0, 1, y}, {0, 0, 1}}};
}

inline Mat3 matmul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline std::array<std::int64_t, 3> heis_from_matrix(const Mat3& m) { return {m[0][1], m[1][2], m[0][2]}; }

/// Weight products by plain left-to-right multiplication over an explicit
/// orbit list supplied by the caller.
inline double product(const std::vector<double>& ws) {
  double p = 1.0;
  for (double w : ws) p *= w;
  return p;
}

/// p^{-1/p} times the l^p norm: the Luxemburg norm for Phi(t) = t^p / p.
inline double power_norm(const std::vector<double>& values, double p) {
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p) * std::pow(p, -1.0 / p);
}

/// Luxemburg norm by a plain fixed-iteration bisection on k over a generic
/// Phi. Used for families without a closed form.
inline double bisect_norm(const std::vector<double>& values, const std::function<double(double)>& phi) {
  double hi = 1.0;
  for (double v : values) hi = std::max(hi, std::abs(v));
  auto rho = [&](double k) {
    double s = 0.0;
    for (double v : values) s += phi(std::abs(v) / k);
    return s;
  };
  bool nonzero = std::any_of(values.begin(), values.end(), [](double v) { return v != 0.0; });
  if (!nonzero) return 0.0;
  while (rho(hi) > 1.0) hi *= 2.0;
  double lo = hi;
  while (rho(lo) <= 1.0) lo /= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (rho(mid) > 1.0 ? lo : hi) = mid;
  }
  return hi;
}

/// max over a dense grid of x*y - phi(x) on [0, x_max].
inline double grid_conjugate(const std::function<double(double)>& phi, double y, double x_max, int n) {
  double best = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = x_max * i / n;
    best = std::max(best, x * y - phi(x));
  }
  return best;
}

} // namespace oracle
