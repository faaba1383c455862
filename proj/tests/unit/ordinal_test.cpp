#include "doctest.h"
#include "mts/errors.hpp"
#include "mts/ordinal.hpp"
#include "support.hpp"

using namespace mts;

namespace {
Ordinal o(const char* s) { return parse_ordinal(s); }
}  // namespace

TEST_SUITE("ordinal") {
  TEST_CASE("compare") {
    CHECK(compare(o("w^w"), o("w*5")) == Cmp::greater);
    CHECK(compare(o("w^2*3"), o("w^2*3")) == Cmp::equal);
    CHECK(compare(o("w^3"), o("w^2*9")) == Cmp::greater);
    CHECK(compare(o("3"), o("w")) == Cmp::less);
    CHECK(compare(Ordinal(), o("1")) == Cmp::less);
  }

  TEST_CASE("add is not commutative") {
    CHECK(o("1") + o("w") == o("w"));
    CHECK(to_string(o("w") + o("1")) == "w + 1");
    CHECK(o("w^2*2 + w") + o("w*3") == o("w^2*2 + w*4"));
    CHECK(o("w*2 + 5") + o("w^2") == o("w^2"));
  }

  TEST_CASE("mul") {
    CHECK(o("w + 1") * o("2") == o("w*2 + 1"));
    CHECK(o("w^2*3 + w") * o("w") == o("w^3"));
    CHECK(o("3") * o("4") == o("12"));
    CHECK(o("2") * o("w") == o("w"));
    CHECK(o("w") * o("2") == o("w*2"));
    CHECK(o("0") * o("w") == Ordinal());
  }

  TEST_CASE("leading data") {
    const auto a = leading_data(o("w^w*2 + w^3"));
    CHECK(a.ell == o("w"));
    CHECK(a.coeff == 2);
    const auto b = leading_data(o("5"));
    CHECK(b.ell == Ordinal());
    CHECK(b.coeff == 5);
    const auto c = leading_data(o("w^2*7 + w"));
    CHECK(c.ell == o("2"));
    CHECK(c.coeff == 7);
    CHECK_THROWS(leading_data(Ordinal()));
  }

  TEST_CASE("omega power") {
    CHECK(omega_power(Ordinal()) == o("1"));
    CHECK(omega_power(o("2")) == o("w^2"));
    CHECK(omega_power(o("w")) == o("w^w"));
  }

  TEST_CASE("successor, predecessor, fundamental sequences") {
    CHECK(o("w + 3").is_successor());
    CHECK(o("w + 3").predecessor() == o("w + 2"));
    CHECK(o("w^2").is_limit());
    CHECK(o("w^2").fundamental(4) == o("w*4"));
    CHECK(o("w^w").fundamental(3) == o("w^3"));
    CHECK(o("w^2 + w").fundamental(5) == o("w^2 + 5"));
    CHECK(o("7").to_finite() == 7);
    CHECK_THROWS(o("w").to_finite());
  }

  TEST_CASE("text round trip") {
    for (const char* s : {"0", "7", "w", "w + 1", "w*2 + 3", "w^2*3 + w", "w^w*2 + w^3", "w^{w + 1}", "w^{w^w}"})
      CHECK(to_string(o(s)) == s);
    CHECK(to_string(o("1 + w")) == "w");
    CHECK(to_string(o("2*3")) == "6");
    CHECK(to_string(o("w^{2}")) == "w^2");
  }

  TEST_CASE("parse errors") {
    CHECK_THROWS_AS(o("w^"), ParseError);
    CHECK_THROWS_AS(o("w +"), ParseError);
    CHECK_THROWS_AS(o("x"), ParseError);
    CHECK_THROWS_AS(o(""), ParseError);
  }

  TEST_CASE("properties on seeded triples") {
    test::Rng rng(7);
    for (int i = 0; i < 300; ++i) {
      const Ordinal a = test::random_ordinal(rng, 3), b = test::random_ordinal(rng, 3);
      CAPTURE(to_string(a));
      CAPTURE(to_string(b));
      CHECK(compare(a + b, a) != Cmp::less);
      CHECK(compare(a + b, b) != Cmp::less);
      CHECK(to_string(parse_ordinal(to_string(a))) == to_string(a));
      CHECK(leading_data(omega_power(a)).ell == a);
      CHECK(leading_data(omega_power(a)).coeff == 1);
      // total order: exactly one relation, antisymmetric
      const Cmp ab = compare(a, b), ba = compare(b, a);
      CHECK((ab == Cmp::equal) == (ba == Cmp::equal));
      CHECK((ab == Cmp::less) == (ba == Cmp::greater));
      CHECK((ab == Cmp::equal) == (a == b));
    }
  }

  TEST_CASE("multiplying by w^k keeps only the leading term") {
    test::Rng rng(11);
    for (int i = 0; i < 100; ++i) {
      const Ordinal a = test::random_ordinal(rng, 2);
      if (a.is_zero()) continue;
      const auto k = std::uniform_int_distribution<int>(1, 4)(rng);
      const Ordinal wk = omega_power(Ordinal::finite(static_cast<std::uint64_t>(k)));
      const auto lead = leading_data(a).ell;
      CHECK(a * wk == omega_power(lead + Ordinal::finite(static_cast<std::uint64_t>(k))));
    }
  }
}
