#pragma once

// Countable discrete groups with exact (checked) integer arithmetic.
//
// Every group type models `DiscreteGroup`: it names an `element_type` that is
// regular and totally ordered (so it can key a std::map), and provides
// identity / mul / inv plus a torsion-freeness flag. Elements round-trip
// through integer coordinate lists, which is how configs and reports spell
// them.

#include "orliczdyn/errors.hpp"

#include <boost/container_hash/hash.hpp>

#include <algorithm>
#include <array>
#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace orliczdyn {

using integer = std::int64_t;

namespace checked {

inline integer add(integer a, integer b) {
  integer r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
  return r;
}

inline integer sub(integer a, integer b) {
  integer r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in subtraction");
  return r;
}

inline integer mul(integer a, integer b) {
  integer r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
  return r;
}

inline integer neg(integer a) { return sub(0, a); }

} // namespace checked

template <class G>
concept DiscreteGroup =
    std::regular<typename G::element_type> && std::totally_ordered<typename G::element_type> &&
    requires(const G& grp, const typename G::element_type& g, std::span<const integer> coords) {
      { grp.identity() } -> std::same_as<typename G::element_type>;
      { grp.mul(g, g) } -> std::same_as<typename G::element_type>;
      { grp.inv(g) } -> std::same_as<typename G::element_type>;
      { grp.torsion_free() } -> std::convertible_to<bool>;
      { grp.coords(g) } -> std::same_as<std::vector<integer>>;
      { grp.from_coords(coords) } -> std::same_as<typename G::element_type>;
      { grp.dimension() } -> std::convertible_to<std::size_t>;
    };

template <DiscreteGroup G>
using element_t = typename G::element_type;

template <DiscreteGroup G>
using element_hash = boost::hash<element_t<G>>;

namespace detail {

inline void require_arity(std::span<const integer> coords, std::size_t n, std::string_view kind) {
  if (coords.size() != n) {
    throw InvalidArgument(std::string(kind) + " element needs " + std::to_string(n) +
                          " coordinates, got " + std::to_string(coords.size()));
  }
}

} // namespace detail

/// The additive integers.
struct Integers {
  using element_type = integer;

  static constexpr std::string_view kind = "Z";

  element_type identity() const { return 0; }
  element_type mul(element_type g, element_type h) const { return checked::add(g, h); }
  element_type inv(element_type g) const { return checked::neg(g); }
  bool torsion_free() const { return true; }
  std::size_t dimension() const { return 1; }

  std::vector<integer> coords(element_type g) const { return {g}; }
  element_type from_coords(std::span<const integer> c) const {
    detail::require_arity(c, 1, kind);
    return c[0];
  }

  bool operator==(const Integers&) const = default;
};

/// The lattice Z^d with runtime dimension d >= 1.
struct Lattice {
  using element_type = std::vector<integer>;

  static constexpr std::string_view kind = "Zd";

  std::size_t dim = 1;

  explicit Lattice(std::size_t d = 1) : dim(d) {
    if (d == 0) throw InvalidArgument("Z^d needs d >= 1");
  }

  element_type identity() const { return element_type(dim, 0); }

  element_type mul(const element_type& g, const element_type& h) const {
    check(g);
    check(h);
    element_type r(dim);
    for (std::size_t i = 0; i < dim; ++i) r[i] = checked::add(g[i], h[i]);
    return r;
  }

  element_type inv(const element_type& g) const {
    check(g);
    element_type r(dim);
    for (std::size_t i = 0; i < dim; ++i) r[i] = checked::neg(g[i]);
    return r;
  }

  bool torsion_free() const { return true; }
  std::size_t dimension() const { return dim; }

  std::vector<integer> coords(const element_type& g) const { return g; }
  element_type from_coords(std::span<const integer> c) const {
    detail::require_arity(c, dim, kind);
    return {c.begin(), c.end()};
  }

  bool operator==(const Lattice&) const = default;

private:
  void check(const element_type& g) const {
    if (g.size() != dim) throw InvalidArgument("Z^d element has wrong dimension");
  }
};

/// Integer Heisenberg group, (x,y,z)(x',y',z') = (x+x', y+y', z+z'+xy').
struct Heisenberg {
  using element_type = std::array<integer, 3>;

  static constexpr std::string_view kind = "heisenberg";

  element_type identity() const { return {0, 0, 0}; }

  element_type mul(const element_type& g, const element_type& h) const {
    return {checked::add(g[0], h[0]), checked::add(g[1], h[1]),
            checked::add(checked::add(g[2], h[2]), checked::mul(g[0], h[1]))};
  }

  element_type inv(const element_type& g) const {
    return {checked::neg(g[0]), checked::neg(g[1]), checked::sub(checked::mul(g[0], g[1]), g[2])};
  }

  bool torsion_free() const { return true; }
  std::size_t dimension() const { return 3; }

  std::vector<integer> coords(const element_type& g) const { return {g[0], g[1], g[2]}; }
  element_type from_coords(std::span<const integer> c) const {
    detail::require_arity(c, 3, kind);
    return {c[0], c[1], c[2]};
  }

  bool operator==(const Heisenberg&) const = default;
};

/// Finite cyclic group Z_m; elements are residues in [0, m).
struct Cyclic {
  using element_type = integer;

  static constexpr std::string_view kind = "cyclic";

  integer modulus = 1;

  explicit Cyclic(integer m = 1) : modulus(m) {
    if (m < 1) throw InvalidArgument("Z_m needs m >= 1");
  }

  element_type identity() const { return 0; }

  element_type mul(element_type g, element_type h) const {
    return reduce(checked::add(reduce(g), reduce(h)));
  }

  element_type inv(element_type g) const { return reduce(checked::neg(reduce(g))); }

  bool torsion_free() const { return modulus == 1; }
  std::size_t dimension() const { return 1; }

  std::vector<integer> coords(element_type g) const { return {g}; }
  element_type from_coords(std::span<const integer> c) const {
    detail::require_arity(c, 1, kind);
    return reduce(c[0]);
  }

  bool operator==(const Cyclic&) const = default;

private:
  element_type reduce(integer v) const {
    integer r = v % modulus;
    return r < 0 ? r + modulus : r;
  }
};

static_assert(DiscreteGroup<Integers>);
static_assert(DiscreteGroup<Lattice>);
static_assert(DiscreteGroup<Heisenberg>);
static_assert(DiscreteGroup<Cyclic>);

/// g^n by square-and-multiply; negative n uses the inverse.
template <DiscreteGroup G>
element_t<G> pow(const G& grp, const element_t<G>& g, integer n) {
  if (n == std::numeric_limits<integer>::min()) throw OverflowError("exponent out of range");
  element_t<G> base = n < 0 ? grp.inv(g) : g;
  auto e = static_cast<std::uint64_t>(n < 0 ? -n : n);
  element_t<G> result = grp.identity();
  while (e != 0) {
    if (e & 1U) result = grp.mul(result, base);
    e >>= 1U;
    if (e != 0) base = grp.mul(base, base);
  }
  return result;
}

/// Smallest n <= n_max with a^n = e. Torsion-free groups answer analytically.
template <DiscreteGroup G>
std::optional<integer> torsion_order(const G& grp, const element_t<G>& a, integer n_max) {
  if (n_max < 1) throw InvalidArgument("torsion_order needs n_max >= 1");
  const auto e = grp.identity();
  if (a == e) return 1;
  if (grp.torsion_free()) return std::nullopt;
  element_t<G> g = a;
  for (integer n = 1; n <= n_max; ++n) {
    if (g == e) return n;
    g = grp.mul(g, a);
  }
  return std::nullopt;
}

/// Finite set of group elements standing in for a compact set; its Haar
/// measure is the cardinality. Stored sorted and deduplicated.
template <DiscreteGroup G>
class CompactSet {
public:
  using element_type = element_t<G>;

  CompactSet() = default;

  explicit CompactSet(std::vector<element_type> elements) : elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  }

  CompactSet(std::initializer_list<element_type> elements)
      : CompactSet(std::vector<element_type>(elements)) {}

  /// Cartesian coordinate box [lo_i, hi_i] in the group's coordinates.
  static CompactSet box(const G& grp, std::span<const integer> lo, std::span<const integer> hi) {
    if (lo.size() != grp.dimension() || hi.size() != grp.dimension()) {
      throw InvalidArgument("box bounds must match the group dimension");
    }
    std::vector<element_type> out;
    std::vector<integer> cur(lo.begin(), lo.end());
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (lo[i] > hi[i]) return CompactSet{};
    }
    while (true) {
      out.push_back(grp.from_coords(cur));
      std::size_t i = 0;
      for (; i < cur.size(); ++i) {
        if (cur[i] < hi[i]) {
          ++cur[i];
          break;
        }
        cur[i] = lo[i];
      }
      if (i == cur.size()) break;
    }
    return CompactSet(std::move(out));
  }

  const std::vector<element_type>& elements() const { return elements_; }
  std::size_t measure() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }

  bool contains(const element_type& g) const {
    return std::binary_search(elements_.begin(), elements_.end(), g);
  }

  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  bool operator==(const CompactSet&) const = default;

private:
  std::vector<element_type> elements_;
};

/// Smallest M with K ∩ K a^{±n} = ∅ for every M < n <= n_max. Absent when K
/// still meets K a^{±n_max}.
template <DiscreteGroup G>
std::optional<integer> separation_constant(const G& grp, const CompactSet<G>& K,
                                           const element_t<G>& a, integer n_max) {
  if (n_max < 1) throw InvalidArgument("separation_constant needs n_max >= 1");
  if (auto order = torsion_order(grp, a, n_max)) throw TorsionElement(*order);

  std::unordered_set<element_t<G>, element_hash<G>> members(K.begin(), K.end());
  auto meets = [&](const element_t<G>& shift) {
    return std::any_of(K.begin(), K.end(),
                       [&](const auto& k) { return members.contains(grp.mul(k, shift)); });
  };

  integer last_collision = 0;
  element_t<G> forward = grp.identity();
  for (integer n = 1; n <= n_max; ++n) {
    forward = grp.mul(forward, a);
    if (meets(forward) || meets(grp.inv(forward))) last_collision = n;
  }
  if (last_collision == n_max) return std::nullopt;
  return last_collision;
}

} // namespace orliczdyn
