#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <string_view>
#include <type_traits>

#include "spsumma/common.hpp"

namespace spsumma {

/// Entry type of the min-select semiring: a weight plus an attached payload
/// (typically a vertex or edge id carried along shortest-path computations).
struct MinSelect {
  double weight = std::numeric_limits<double>::infinity();
  std::int64_t payload = std::numeric_limits<std::int64_t>::max();

  bool operator==(const MinSelect&) const = default;
};

/// A semiring is a static policy type: the additive and multiplicative
/// operators, their identities, and a commutativity flag for the
/// multiplication. Matrices are parameterized on the semiring itself, so
/// entries of different algebras cannot be mixed.
template <class S>
concept SemiringLike = requires(const typename S::value_type& a,
                                const typename S::value_type& b, double x) {
  typename S::value_type;
  { S::add(a, b) } -> std::same_as<typename S::value_type>;
  { S::mul(a, b) } -> std::same_as<typename S::value_type>;
  { S::zero() } -> std::same_as<typename S::value_type>;
  { S::one() } -> std::same_as<typename S::value_type>;
  { S::is_zero(a) } -> std::same_as<bool>;
  { S::from_real(x) } -> std::same_as<typename S::value_type>;
  { S::name } -> std::convertible_to<std::string_view>;
  { S::is_commutative_mul } -> std::convertible_to<bool>;
};

/// Ordinary floating arithmetic: (+, *, 0, 1).
struct ArithmeticSemiring {
  using value_type = double;
  static constexpr std::string_view name = "arithmetic";
  static constexpr bool is_commutative_mul = true;

  static value_type add(value_type a, value_type b) { return a + b; }
  static value_type mul(value_type a, value_type b) { return a * b; }
  static constexpr value_type zero() { return 0.0; }
  static constexpr value_type one() { return 1.0; }
  static bool is_zero(value_type v) { return v == zero(); }
  static value_type from_real(double x) { return x; }
};

/// Tropical algebra: add = min, mul = +, zero = +inf, one = 0.
/// Powers of an adjacency matrix over this semiring are hop-bounded
/// shortest-path distances.
struct MinPlusSemiring {
  using value_type = double;
  static constexpr std::string_view name = "minplus";
  static constexpr bool is_commutative_mul = true;

  static value_type add(value_type a, value_type b) { return std::min(a, b); }
  static value_type mul(value_type a, value_type b) { return a + b; }
  static constexpr value_type zero() {
    return std::numeric_limits<double>::infinity();
  }
  static constexpr value_type one() { return 0.0; }
  static bool is_zero(value_type v) { return v == zero(); }
  static value_type from_real(double x) { return x; }
};

/// Reachability algebra: add = OR, mul = AND.
struct BooleanSemiring {
  using value_type = bool;
  static constexpr std::string_view name = "boolean";
  static constexpr bool is_commutative_mul = true;

  static value_type add(value_type a, value_type b) { return a || b; }
  static value_type mul(value_type a, value_type b) { return a && b; }
  static constexpr value_type zero() { return false; }
  static constexpr value_type one() { return true; }
  static bool is_zero(value_type v) { return !v; }
  static value_type from_real(double x) { return x != 0.0; }
};

/// Min-select: add keeps the pair with the smaller weight (ties broken
/// toward the smaller payload, so merging is deterministic); mul adds
/// weights and keeps the right operand's payload. A payload equal to
/// `neutral_payload` is transparent, which makes `one()` a true
/// multiplicative identity. Any result with infinite weight collapses to
/// the canonical zero so that annihilation holds exactly.
///
/// The payload rule makes mul non-commutative: the distributed transpose
/// path refuses this semiring, the serial kernel accepts it.
struct MinSelectSemiring {
  using value_type = MinSelect;
  static constexpr std::string_view name = "minselect";
  static constexpr bool is_commutative_mul = false;
  static constexpr std::int64_t neutral_payload = -1;

  static value_type add(const value_type& a, const value_type& b) {
    const value_type& picked =
        (b.weight < a.weight ||
         (b.weight == a.weight && b.payload < a.payload))
            ? b
            : a;
    return std::isinf(picked.weight) ? zero() : picked;
  }
  static value_type mul(const value_type& a, const value_type& b) {
    const double w = a.weight + b.weight;
    if (std::isinf(w)) return zero();
    return {w, b.payload == neutral_payload ? a.payload : b.payload};
  }
  static value_type zero() { return {}; }
  static value_type one() { return {0.0, neutral_payload}; }
  static bool is_zero(const value_type& v) { return std::isinf(v.weight); }
  static value_type from_real(double x) { return {x, 0}; }
};

enum class SemiringId { arithmetic, minplus, boolean, minselect };

/// Maps the CLI `--semiring` names onto the built-in algebras.
inline SemiringId semiring_by_name(std::string_view name) {
  if (name == ArithmeticSemiring::name) return SemiringId::arithmetic;
  if (name == MinPlusSemiring::name) return SemiringId::minplus;
  if (name == BooleanSemiring::name) return SemiringId::boolean;
  if (name == MinSelectSemiring::name) return SemiringId::minselect;
  throw MalformedInputError("unknown semiring '" + std::string(name) +
                            "' (expected arithmetic, minplus, boolean, or "
                            "minselect)");
}

/// Invokes `f` with a `std::type_identity` tag of the selected semiring.
template <class F>
decltype(auto) with_semiring(SemiringId id, F&& f) {
  switch (id) {
    case SemiringId::arithmetic:
      return f(std::type_identity<ArithmeticSemiring>{});
    case SemiringId::minplus:
      return f(std::type_identity<MinPlusSemiring>{});
    case SemiringId::boolean:
      return f(std::type_identity<BooleanSemiring>{});
    case SemiringId::minselect:
      return f(std::type_identity<MinSelectSemiring>{});
  }
  throw InternalError("invalid semiring id");
}

static_assert(SemiringLike<ArithmeticSemiring>);
static_assert(SemiringLike<MinPlusSemiring>);
static_assert(SemiringLike<BooleanSemiring>);
static_assert(SemiringLike<MinSelectSemiring>);

}  // namespace spsumma
