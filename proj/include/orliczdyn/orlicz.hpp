#pragma once

// Finitely supported real functions on a discrete group, with the modular
// and Luxemburg norm for counting measure.

#include "orliczdyn/group.hpp"
#include "orliczdyn/young.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace orliczdyn {

/// Sparse map element -> value with zero entries pruned.
template <DiscreteGroup G>
class OrliczVector {
public:
  using element_type = element_t<G>;
  using storage_type = std::map<element_type, double>;

  OrliczVector() = default;

  explicit OrliczVector(storage_type entries) : entries_(std::move(entries)) { prune(); }

  /// Duplicate elements accumulate.
  OrliczVector(std::initializer_list<std::pair<element_type, double>> entries) {
    for (const auto& [x, v] : entries) entries_[x] += v;
    prune();
  }

  static OrliczVector delta(const element_type& x, double value = 1.0) {
    return OrliczVector(storage_type{{x, value}});
  }

  static OrliczVector indicator(const CompactSet<G>& B) {
    storage_type s;
    for (const auto& x : B) s.emplace(x, 1.0);
    return OrliczVector(std::move(s));
  }

  const storage_type& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  double operator[](const element_type& x) const {
    auto it = entries_.find(x);
    return it == entries_.end() ? 0.0 : it->second;
  }

  std::vector<element_type> support() const {
    std::vector<element_type> out;
    out.reserve(entries_.size());
    for (const auto& [x, v] : entries_) out.push_back(x);
    return out;
  }

  CompactSet<G> support_set() const { return CompactSet<G>(support()); }

  double sup_abs() const {
    double m = 0.0;
    for (const auto& [x, v] : entries_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Pointwise product with a function of the element.
  template <class F>
  OrliczVector multiplied_by(F&& fn) const {
    storage_type s;
    for (const auto& [x, v] : entries_) s.emplace(x, v * fn(x));
    return OrliczVector(std::move(s));
  }

  /// Restriction to a set (multiplication by its indicator).
  OrliczVector restricted_to(const CompactSet<G>& E) const {
    storage_type s;
    for (const auto& [x, v] : entries_) {
      if (E.contains(x)) s.emplace(x, v);
    }
    return OrliczVector(std::move(s));
  }

  friend OrliczVector operator+(const OrliczVector& f, const OrliczVector& g) {
    storage_type s = f.entries_;
    for (const auto& [x, v] : g.entries_) s[x] += v;
    return OrliczVector(std::move(s));
  }

  friend OrliczVector operator-(const OrliczVector& f, const OrliczVector& g) {
    storage_type s = f.entries_;
    for (const auto& [x, v] : g.entries_) s[x] -= v;
    return OrliczVector(std::move(s));
  }

  friend OrliczVector operator*(double c, const OrliczVector& f) {
    storage_type s;
    for (const auto& [x, v] : f.entries_) s.emplace(x, c * v);
    return OrliczVector(std::move(s));
  }

  bool operator==(const OrliczVector&) const = default;

private:
  void prune() { std::erase_if(entries_, [](const auto& kv) { return kv.second == 0.0; }); }

  storage_type entries_;
};

namespace detail {

// Sorted magnitudes make the modular independent of support order, so
// translated copies of a vector get bit-identical norms.
template <DiscreteGroup G>
std::vector<double> sorted_magnitudes(const OrliczVector<G>& f) {
  std::vector<double> mags;
  mags.reserve(f.size());
  for (const auto& [x, v] : f.entries()) mags.push_back(std::abs(v));
  std::sort(mags.begin(), mags.end());
  return mags;
}

inline double modular_of(const std::vector<double>& mags, const YoungFunction& phi, double k) {
  double sum = 0.0;
  for (double m : mags) sum += saturating(phi, m / k);
  return sum;
}

} // namespace detail

/// rho(f/k) = sum over the support of Phi(|f(x)| / k).
template <DiscreteGroup G>
double modular(const OrliczVector<G>& f, const YoungFunction& phi, double k) {
  if (!(k > 0.0)) throw InvalidArgument("modular needs k > 0");
  double sum = 0.0;
  for (double m : detail::sorted_magnitudes(f)) sum += detail::saturating(phi, m / k);
  return sum;
}

/// N_Phi(f) = inf{k > 0 : rho(f/k) <= 1}, the root of rho(k) = 1 found by
/// bracketing from k0 = max|f| and bisecting to relative tolerance `rel_tol`.
template <DiscreteGroup G>
double luxemburg_norm(const OrliczVector<G>& f, const YoungFunction& phi, double rel_tol = 1e-12) {
  if (f.empty()) return 0.0;
  const auto mags = detail::sorted_magnitudes(f);
  for (double m : mags) {
    if (!std::isfinite(m)) throw NonFinite("Luxemburg norm of a vector with non-finite entries");
  }
  auto excess = [&](double k) { return detail::modular_of(mags, phi, k) - 1.0; };

  double k = mags.back();
  double r = excess(k);
  if (r == 0.0) return k;
  double lo = k;
  double hi = k;
  if (r > 0.0) {
    do {
      lo = hi;
      hi *= 2.0;
    } while (excess(hi) > 0.0);
  } else {
    do {
      hi = lo;
      lo /= 2.0;
    } while (excess(lo) < 0.0);
  }

  std::uintmax_t max_iter = 400;
  auto [a, b] = boost::math::tools::bisect(excess, lo, hi, detail::relative_tolerance(rel_tol), max_iter);
  return 0.5 * (a + b);
}

/// N_Phi(chi_B) = 1 / Phi^{-1}(1/|B|).
inline double indicator_norm_closed_form(std::size_t measure, const YoungFunction& phi) {
  if (measure < 1) throw InvalidArgument("indicator norm needs |B| >= 1");
  return 1.0 / inverse(phi, 1.0 / static_cast<double>(measure));
}

template <DiscreteGroup G>
double indicator_norm_closed_form(const CompactSet<G>& B, const YoungFunction& phi) {
  return indicator_norm_closed_form(B.measure(), phi);
}

/// Right translation f * delta_a: the result g satisfies g(x a) = f(x).
template <DiscreteGroup G>
OrliczVector<G> translate(const OrliczVector<G>& f, const G& grp, const element_t<G>& a) {
  typename OrliczVector<G>::storage_type s;
  for (const auto& [x, v] : f.entries()) s.emplace(grp.mul(x, a), v);
  return OrliczVector<G>(std::move(s));
}

} // namespace orliczdyn
