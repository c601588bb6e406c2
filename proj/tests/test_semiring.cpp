#include <catch2/catch_amalgamated.hpp>

#include "spsumma/semiring.hpp"
#include "testutil.hpp"

using namespace spsumma;

namespace {

// Sampled algebra laws. Values are drawn integer-valued so that even the
// floating-point semirings evaluate exactly and the laws hold bitwise.
template <SemiringLike SR>
void check_laws() {
  std::mt19937_64 rng(7);
  auto draw = [&rng]() -> typename SR::value_type {
    switch (rng() % 8) {
      case 0:
        return SR::zero();
      case 1:
        return SR::one();
      default:
        return testutil::ValueGen<SR>::draw(rng, /*exact=*/true);
    }
  };
  for (int i = 0; i < 1000; ++i) {
    const auto x = draw();
    const auto y = draw();
    const auto z = draw();

    REQUIRE(SR::add(x, SR::zero()) == x);
    REQUIRE(SR::add(SR::zero(), x) == x);
    REQUIRE(SR::mul(x, SR::one()) == x);
    REQUIRE(SR::mul(SR::one(), x) == x);
    REQUIRE(SR::mul(x, SR::zero()) == SR::zero());
    REQUIRE(SR::mul(SR::zero(), x) == SR::zero());

    REQUIRE(SR::add(x, y) == SR::add(y, x));
    REQUIRE(SR::add(SR::add(x, y), z) == SR::add(x, SR::add(y, z)));
    REQUIRE(SR::mul(SR::mul(x, y), z) == SR::mul(x, SR::mul(y, z)));
    if (SR::is_commutative_mul) {
      REQUIRE(SR::mul(x, y) == SR::mul(y, x));
    }
  }
  REQUIRE(SR::is_zero(SR::zero()));
  REQUIRE(!SR::is_zero(SR::one()));
}

}  // namespace

TEST_CASE("semiring laws hold on sampled triples") {
  check_laws<ArithmeticSemiring>();
  check_laws<MinPlusSemiring>();
  check_laws<BooleanSemiring>();
  check_laws<MinSelectSemiring>();
}

TEST_CASE("arithmetic semiring basics") {
  using SR = ArithmeticSemiring;
  REQUIRE(SR::add(2.0, 3.0) == 5.0);
  REQUIRE(SR::mul(7.5, SR::one()) == 7.5);
  REQUIRE(SR::add(SR::zero(), -4.0) == -4.0);
  REQUIRE(SR::is_commutative_mul);
}

TEST_CASE("min-plus semiring basics") {
  using SR = MinPlusSemiring;
  REQUIRE(SR::add(3.0, 5.0) == 3.0);
  REQUIRE(SR::mul(3.0, 5.0) == 8.0);
  REQUIRE(SR::mul(2.0, SR::zero()) == std::numeric_limits<double>::infinity());
  REQUIRE(SR::one() == 0.0);
  REQUIRE(SR::is_commutative_mul);
}

TEST_CASE("boolean semiring basics") {
  using SR = BooleanSemiring;
  REQUIRE(SR::add(true, false) == true);
  REQUIRE(SR::mul(true, false) == false);
  REQUIRE(SR::add(false, false) == false);
  REQUIRE(SR::is_commutative_mul);
}

TEST_CASE("min-select picks the lighter pair and keeps right payloads") {
  using SR = MinSelectSemiring;
  REQUIRE(SR::add({3.0, 7}, {5.0, 2}) == MinSelect{3.0, 7});
  // Equal weights resolve toward the smaller payload.
  REQUIRE(SR::add({3.0, 7}, {3.0, 2}) == MinSelect{3.0, 2});
  REQUIRE(SR::mul({1.0, 7}, {2.0, 9}) == MinSelect{3.0, 9});
}

TEST_CASE("min-select multiplication is not commutative") {
  using SR = MinSelectSemiring;
  REQUIRE_FALSE(SR::is_commutative_mul);
  const MinSelect x{1.0, 7};
  const MinSelect y{2.0, 9};
  REQUIRE(!(SR::mul(x, y) == SR::mul(y, x)));

  // The other built-ins commute on samples.
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double a = testutil::u01(rng);
    const double b = testutil::u01(rng);
    REQUIRE(ArithmeticSemiring::mul(a, b) == ArithmeticSemiring::mul(b, a));
    REQUIRE(MinPlusSemiring::mul(a, b) == MinPlusSemiring::mul(b, a));
  }
}

TEST_CASE("semirings resolve by name") {
  REQUIRE(semiring_by_name("arithmetic") == SemiringId::arithmetic);
  REQUIRE(semiring_by_name("minplus") == SemiringId::minplus);
  REQUIRE(semiring_by_name("boolean") == SemiringId::boolean);
  REQUIRE(semiring_by_name("minselect") == SemiringId::minselect);
  REQUIRE_THROWS_AS(semiring_by_name("tropical"), MalformedInputError);

  const auto name = with_semiring(SemiringId::minplus, [](auto tag) {
    return std::string(decltype(tag)::type::name);
  });
  REQUIRE(name == "minplus");
}
