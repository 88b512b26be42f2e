#pragma once

// Weights, the weighted translation T_{a,w} f = w * (f * delta_a), its right
// inverse S_{a,w}, closed-form iterates, and the weight-product sequences
//
//   phi_n(x)       = prod_{j=1}^{n}   w(x a^j)
//   phi_tilde_n(x) = prod_{j=0}^{n-1} w(x a^{-j})^{-1}
//
// which govern every dynamical criterion.

#include "orliczdyn/group.hpp"
#include "orliczdyn/orlicz.hpp"
#include "orliczdyn/young.hpp"

#include <climits>
#include <cmath>
#include <map>
#include <numbers>
#include <type_traits>
#include <variant>
#include <vector>

namespace orliczdyn {

struct ConstantWeight {
  double c = 1.0;
  bool operator==(const ConstantWeight&) const = default;
};

/// On Z only: c_neg for x <= 0, c_pos for x >= 1.
struct TwoSidedStepWeight {
  double c_neg = 1.0;
  double c_pos = 1.0;
  bool operator==(const TwoSidedStepWeight&) const = default;
};

/// On the Heisenberg group only, a function of z: 1/2 for z >= 1, 2^{-z} for
/// -1 < z < 1 (so 1 at integer z = 0), 2 for z <= -1.
struct HeisenbergPaperWeight {
  bool operator==(const HeisenbergPaperWeight&) const = default;
};

template <DiscreteGroup G>
struct TableWeight {
  std::map<element_t<G>, double> entries;
  double fallback = 1.0;
  bool operator==(const TableWeight&) const = default;
};

template <DiscreteGroup G>
class Weight {
public:
  using element_type = element_t<G>;
  using Family = std::variant<ConstantWeight, TwoSidedStepWeight, HeisenbergPaperWeight, TableWeight<G>>;

  explicit Weight(Family family) : family_(std::move(family)) { validate(); }

  const Family& family() const { return family_; }

  double operator()(const element_type& x) const {
    return std::visit([&x](const auto& w) { return eval(w, x); }, family_);
  }

  /// Declared sup of w (the L-infinity bound W_max).
  double sup() const {
    return std::visit(
        [](const auto& w) -> double {
          using W = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<W, ConstantWeight>) return w.c;
          else if constexpr (std::is_same_v<W, TwoSidedStepWeight>) return std::max(w.c_neg, w.c_pos);
          else if constexpr (std::is_same_v<W, HeisenbergPaperWeight>) return 2.0;
          else {
            double m = w.fallback;
            for (const auto& [x, v] : w.entries) m = std::max(m, v);
            return m;
          }
        },
        family_);
  }

  /// Declared inf of w; 1/inf is the bound on w^{-1}.
  double inf() const {
    return std::visit(
        [](const auto& w) -> double {
          using W = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<W, ConstantWeight>) return w.c;
          else if constexpr (std::is_same_v<W, TwoSidedStepWeight>) return std::min(w.c_neg, w.c_pos);
          else if constexpr (std::is_same_v<W, HeisenbergPaperWeight>) return 0.5;
          else {
            double m = w.fallback;
            for (const auto& [x, v] : w.entries) m = std::min(m, v);
            return m;
          }
        },
        family_);
  }

  bool operator==(const Weight&) const = default;

private:
  static double eval(const ConstantWeight& w, const element_type&) { return w.c; }

  static double eval(const TwoSidedStepWeight& w, const element_type& x) {
    if constexpr (std::is_same_v<G, Integers>) {
      return x <= 0 ? w.c_neg : w.c_pos;
    } else {
      throw InvalidArgument("two-sided step weight is defined on Z only");
    }
  }

  static double eval(const HeisenbergPaperWeight&, const element_type& x) {
    if constexpr (std::is_same_v<G, Heisenberg>) {
      const integer z = x[2];
      if (z >= 1) return 0.5;
      if (z <= -1) return 2.0;
      return 1.0;
    } else {
      throw InvalidArgument("Heisenberg example weight is defined on the Heisenberg group only");
    }
  }

  static double eval(const TableWeight<G>& w, const element_type& x) {
    auto it = w.entries.find(x);
    return it == w.entries.end() ? w.fallback : it->second;
  }

  void validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    std::visit(
        [&](const auto& w) {
          using W = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<W, ConstantWeight>) {
            if (!positive(w.c)) throw InvalidArgument("constant weight must be positive and finite");
          } else if constexpr (std::is_same_v<W, TwoSidedStepWeight>) {
            if (!std::is_same_v<G, Integers>) throw InvalidArgument("two-sided step weight is defined on Z only");
            if (!positive(w.c_neg) || !positive(w.c_pos)) {
              throw InvalidArgument("two-sided step weight values must be positive and finite");
            }
          } else if constexpr (std::is_same_v<W, HeisenbergPaperWeight>) {
            if (!std::is_same_v<G, Heisenberg>) {
              throw InvalidArgument("Heisenberg example weight is defined on the Heisenberg group only");
            }
          } else {
            if (!positive(w.fallback)) throw InvalidArgument("table weight default must be positive and finite");
            for (const auto& [x, v] : w.entries) {
              if (!positive(v)) throw InvalidArgument("table weight entries must be positive and finite");
            }
          }
        },
        family_);
  }

  Family family_;
};

template <DiscreteGroup G>
struct WeightedSystem {
  G group;
  element_t<G> a;
  Weight<G> weight;
  YoungFunction young;
};

/// A weight product held as value and natural log. The value may underflow
/// to 0 (or overflow to inf) legitimately; the log never does.
struct WeightProduct {
  double value = 1.0;
  double log_value = 0.0;

  bool operator==(const WeightProduct&) const = default;
};

/// Product accumulator with the binary exponent split off after every step.
/// Scaling by powers of two is exact, so while the plain product stays normal
/// the result is bit-identical to naive multiplication.
class ScaledProduct {
public:
  void multiply(double w) {
    int e = 0;
    mantissa_ = std::frexp(mantissa_ * w, &e);
    exponent_ += e;
  }

  WeightProduct product() const { return make(mantissa_, exponent_); }

  WeightProduct reciprocal() const {
    int e = 0;
    const double m = std::frexp(1.0 / mantissa_, &e);
    return make(m, e - exponent_);
  }

private:
  static WeightProduct make(double m, long long e) {
    const long long clamped = std::clamp<long long>(e, INT_MIN / 2, INT_MAX / 2);
    return {std::ldexp(m, static_cast<int>(clamped)),
            std::log(m) + static_cast<double>(e) * std::numbers::ln2};
  }

  double mantissa_ = 0.5;
  long long exponent_ = 1;
};

/// (T f)(x) = w(x) f(x a^{-1}).
template <DiscreteGroup G>
OrliczVector<G> apply_T(const WeightedSystem<G>& sys, const OrliczVector<G>& f) {
  typename OrliczVector<G>::storage_type s;
  for (const auto& [y, v] : f.entries()) {
    const auto x = sys.group.mul(y, sys.a);
    s.emplace(x, sys.weight(x) * v);
  }
  return OrliczVector<G>(std::move(s));
}

/// (S h)(x) = h(x a) / w(x a), so that T S = id.
template <DiscreteGroup G>
OrliczVector<G> apply_S(const WeightedSystem<G>& sys, const OrliczVector<G>& h) {
  typename OrliczVector<G>::storage_type s;
  const auto a_inv = sys.group.inv(sys.a);
  for (const auto& [y, v] : h.entries()) s.emplace(sys.group.mul(y, a_inv), v / sys.weight(y));
  return OrliczVector<G>(std::move(s));
}

template <DiscreteGroup G>
WeightProduct phi_product(const WeightedSystem<G>& sys, const element_t<G>& x, std::size_t n) {
  ScaledProduct acc;
  auto g = x;
  for (std::size_t j = 1; j <= n; ++j) {
    g = sys.group.mul(g, sys.a);
    acc.multiply(sys.weight(g));
  }
  return acc.product();
}

template <DiscreteGroup G>
WeightProduct phi_tilde_product(const WeightedSystem<G>& sys, const element_t<G>& x, std::size_t n) {
  ScaledProduct acc;
  const auto a_inv = sys.group.inv(sys.a);
  auto g = x;
  for (std::size_t j = 0; j < n; ++j) {
    acc.multiply(sys.weight(g));
    g = sys.group.mul(g, a_inv);
  }
  return acc.reciprocal();
}

/// phi_0(x), ..., phi_{n_max}(x) by phi_{n+1}(x) = phi_n(x) w(x a^{n+1}).
template <DiscreteGroup G>
std::vector<WeightProduct> phi_series(const WeightedSystem<G>& sys, const element_t<G>& x,
                                      std::size_t n_max) {
  std::vector<WeightProduct> out;
  out.reserve(n_max + 1);
  ScaledProduct acc;
  out.push_back(acc.product());
  auto g = x;
  for (std::size_t j = 1; j <= n_max; ++j) {
    g = sys.group.mul(g, sys.a);
    acc.multiply(sys.weight(g));
    out.push_back(acc.product());
  }
  return out;
}

/// phi_tilde_0(x), ..., phi_tilde_{n_max}(x).
template <DiscreteGroup G>
std::vector<WeightProduct> phi_tilde_series(const WeightedSystem<G>& sys, const element_t<G>& x,
                                            std::size_t n_max) {
  std::vector<WeightProduct> out;
  out.reserve(n_max + 1);
  ScaledProduct acc;
  out.push_back(acc.reciprocal());
  const auto a_inv = sys.group.inv(sys.a);
  auto g = x;
  for (std::size_t j = 1; j <= n_max; ++j) {
    acc.multiply(sys.weight(g));
    g = sys.group.mul(g, a_inv);
    out.push_back(acc.reciprocal());
  }
  return out;
}

/// T^n f in closed form: (T^n f)(y a^n) = phi_n(y) f(y).
template <DiscreteGroup G>
OrliczVector<G> apply_T_n(const WeightedSystem<G>& sys, const OrliczVector<G>& f, std::size_t n) {
  const auto shift = pow(sys.group, sys.a, static_cast<integer>(n));
  typename OrliczVector<G>::storage_type s;
  for (const auto& [y, v] : f.entries()) s.emplace(sys.group.mul(y, shift), v * phi_product(sys, y, n).value);
  return OrliczVector<G>(std::move(s));
}

/// S^n h in closed form: (S^n h)(y a^{-n}) = phi_tilde_n(y) h(y).
template <DiscreteGroup G>
OrliczVector<G> apply_S_n(const WeightedSystem<G>& sys, const OrliczVector<G>& h, std::size_t n) {
  const auto shift = pow(sys.group, sys.a, -static_cast<integer>(n));
  typename OrliczVector<G>::storage_type s;
  for (const auto& [y, v] : h.entries()) {
    s.emplace(sys.group.mul(y, shift), v * phi_tilde_product(sys, y, n).value);
  }
  return OrliczVector<G>(std::move(s));
}

} // namespace orliczdyn
