#include <cmath>
#include <functional>

#include "doctest.h"
#include "mts/analysis.hpp"
#include "mts/errors.hpp"
#include "support.hpp"

using namespace mts;

namespace {

// Max of the ordinal sum over every ordered tuple (listed n_s, ..., n_1)
// with eps * product > theta_m. Entries are capped at `cap`.
Ordinal gamma_oracle(const Rational& eps, int m, const ThetaRule& theta, const OrdinalRule& beta, int cap) {
  Ordinal best;
  const Rational target = theta(m);
  std::function<void(const Rational&, const Ordinal&)> go = [&](const Rational& prod, const Ordinal& sum) {
    if (compare(sum, best) == Cmp::greater) best = sum;
    for (int n = 1; n <= cap; ++n) {
      const Rational next = prod * theta(n);
      if (eps * next > target) go(next, sum + beta(n));
    }
  };
  go(Rational(1), Ordinal());
  return best;
}

// pi(n) by enumerating the compositions of n+1; a larger sum never helps
// when theta is nonincreasing.
Rational pi_oracle(const ThetaRule& theta, int n) {
  const int s = n + 1;
  Rational best = 0;
  for (unsigned mask = 0; mask < (1U << (s - 1)); ++mask) {
    Rational prod = 1;
    int part = 1;
    for (int b = 0; b < s - 1; ++b) {
      if (mask >> b & 1U) {
        prod *= theta(part);
        part = 1;
      } else {
        ++part;
      }
    }
    prod *= theta(part);
    if (prod > best) best = prod;
  }
  return best;
}

GammaConfig geometric_cfg(const char* beta = "n") {
  GammaConfig cfg;
  cfg.theta = ThetaRule::geometric(Rational(1, 2));
  cfg.seq = OrdinalRule::parse(beta);
  return cfg;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("gamma examples") {
    const auto g = gamma_ordinal(Rational(1), 4, geometric_cfg());
    CHECK(to_string(g.value) == "3");
    CHECK(g.complete);
    CHECK(gamma_ordinal(Rational(1, 1024), 1, geometric_cfg()).value.is_zero());
    GammaConfig h = geometric_cfg("w^{n}");
    h.theta = ThetaRule::harmonic(Rational(1));
    CHECK(gamma_ordinal(Rational(1), 1, h).value.is_zero());
  }

  TEST_CASE("gamma optimal ordering matches ordered tuple search") {
    const ThetaRule harmonic = ThetaRule::harmonic(Rational(1));
    for (const char* beta : {"n", "w*n + 1", "w^{n} + n", "w^{n}*2 + w", "w^2 + w*n"}) {
      GammaConfig cfg;
      cfg.theta = harmonic;
      cfg.seq = OrdinalRule::parse(beta);
      for (int m = 1; m <= 7; ++m) {
        for (const Rational eps : {Rational(1), Rational(1, 2), Rational(3, 2)}) {
          CAPTURE(beta);
          CAPTURE(m);
          CAPTURE(to_string(eps));
          const auto r = gamma_ordinal(eps, m, cfg);
          REQUIRE(r.complete);
          CHECK(r.value == gamma_oracle(eps, m, harmonic, cfg.seq, 12));
        }
      }
    }
  }

  TEST_CASE("gamma ell-of-product mode") {
    GammaConfig cfg;
    cfg.mode = GammaMode::ell_of_product;
    cfg.theta = ThetaRule::geometric(Rational(1, 2));
    cfg.seq = OrdinalRule::parse("w^{n}");
    // eps = 1, m = 4: entries summing below 4; l(w^{n_s}...w^{n_1}) = sum
    CHECK(to_string(gamma_ordinal(Rational(1), 4, cfg).value) == "3");
  }

  TEST_CASE("gamma is monotone in eps and m") {
    GammaConfig cfg;
    cfg.theta = ThetaRule::harmonic(Rational(1));
    cfg.seq = OrdinalRule::parse("w*n");
    Ordinal prev;
    for (int m = 1; m <= 12; ++m) {
      const auto r = gamma_ordinal(Rational(1, 2), m, cfg);
      CHECK(compare(r.value, prev) != Cmp::less);
      CHECK(compare(gamma_ordinal(Rational(1), m, cfg).value, r.value) != Cmp::less);
      prev = r.value;
    }
  }

  TEST_CASE("gamma reports an incomplete horizon") {
    GammaConfig cfg = geometric_cfg();
    cfg.horizon = 3;
    const auto r = gamma_ordinal(Rational(1), 10, cfg);
    CHECK_FALSE(r.complete);
    CHECK(r.horizon_used == 3);
  }

  TEST_CASE("dagger probes") {
    GammaConfig harmonic;
    harmonic.theta = ThetaRule::harmonic(Rational(1));
    std::vector<Ordinal> betas;
    for (int b = 0; b <= 8; ++b) betas.push_back(Ordinal::finite(static_cast<std::uint64_t>(b)));
    const auto rep = dagger_probe(Rational(1, 2), betas, 30, harmonic, OrdinalRule::parse("n"));
    REQUIRE(rep.entries.size() == 9);
    for (const auto& e : rep.entries) CHECK(e.witness.has_value());

    const auto none = dagger_probe(Rational(1, 8), {Ordinal::finite(5)}, 40, geometric_cfg(), OrdinalRule::parse("n"));
    CHECK_FALSE(none.entries.at(0).witness.has_value());
    CHECK(none.all_complete);
    for (int m = 5; m <= 40; ++m) CHECK(to_string(none.gammas[static_cast<std::size_t>(m - 1)].value) == std::to_string(m - 4));

    CHECK(dagger_probe(Rational(1), {}, 10, geometric_cfg(), OrdinalRule::parse("n")).entries.empty());
  }

  TEST_CASE("dagger witnesses survive a larger horizon") {
    GammaConfig harmonic;
    harmonic.theta = ThetaRule::harmonic(Rational(1));
    const std::vector<Ordinal> betas{Ordinal::finite(1), Ordinal::finite(4)};
    const auto a = dagger_probe(Rational(1, 2), betas, 15, harmonic, OrdinalRule::parse("n"));
    const auto b = dagger_probe(Rational(1, 2), betas, 30, harmonic, OrdinalRule::parse("n"));
    for (std::size_t i = 0; i < betas.size(); ++i)
      if (a.entries[i].witness) CHECK(a.entries[i].witness == b.entries[i].witness);
  }

  TEST_CASE("diagnostics") {
    const auto g = theta_diagnostics(ThetaRule::geometric(Rational(1, 2)), 30);
    for (const auto& e : g.ratio_profile) {
      CHECK(e.sup == pow(Rational(1, 2), static_cast<unsigned>(e.m)));
      CHECK(e.tail == e.sup);
    }
    CHECK(g.submultiplicative);
    CHECK(g.submultiplicative_equality);
    CHECK_FALSE(g.ratio_limit_positive);
    CHECK(g.certainty == "horizon");

    const auto h = theta_diagnostics(ThetaRule::harmonic(Rational(1)), 50);
    CHECK(h.ratio_limit_positive);
    const auto& root = h.root_profile.at(49);
    CHECK(root.n == 50);
    const double expect = std::pow(1.0 / 51.0, 1.0 / 50.0);
    CHECK(root.lo.get_d() <= expect + 1e-12);
    CHECK(root.hi.get_d() >= expect - 1e-12);
    CHECK(Rational(root.hi - root.lo).get_d() <= 1e-6);

    const auto l = theta_diagnostics(ThetaRule::list({Rational(1, 2), Rational(1, 3), Rational(1, 10)}, Rational(1, 2)), 20);
    CHECK_FALSE(l.submultiplicative);
    REQUIRE(l.violation);
    CHECK(*l.violation == std::pair{1, 2});
  }

  TEST_CASE("tameness") {
    const auto schreier = [](int n) { return Family::schreier(Ordinal::finite(static_cast<std::uint64_t>(n))); };
    CHECK(tame_check(schreier, 1, 3, 10).pass);
    CHECK(tame_check([](int) { return parse_family("S[1]"); }, 1, 4, 10).pass);

    const auto ank = [](int n) { return Family::ank(n + 1); };
    const auto r = tame_check(ank, 1, 5, 12);
    CHECK_FALSE(r.pass);
    CHECK(r.n == 4);
    CHECK(r.clause == 2);
    REQUIRE(r.counterexample);
    CHECK(*r.counterexample == FiniteSet{3, 4, 5, 6, 7, 8});
    // a genuine counterexample: inside (A_5 - A_2)[A_2] and not in A_5
    const MemberOptions opts{12};
    CHECK(member(parse_family("(A[5]-A[2]).apply(A[2])"), *r.counterexample, opts));
    CHECK_FALSE(member(parse_family("A[5]"), *r.counterexample));
    // {3..10} also fails at n = 5
    const FiniteSet wide{3, 4, 5, 6, 7, 8, 9, 10};
    CHECK(member(parse_family("(A[6]-A[2]).apply(A[2])"), wide, opts));
    CHECK_FALSE(member(parse_family("A[6]"), wide));
  }

  TEST_CASE("spreading constants") {
    const auto sp = schreier_space();
    std::vector<Vector> units;
    for (int k = 1; k <= 8; ++k) units.push_back(Vector::unit(k));
    const auto r = spreading_constant(units, parse_family("S[1]"), {2, 6}, {}, sp);
    CHECK(r.value == Rational(1, 2));
    CHECK(spreading_constant({parse_vector("1:1 2:1/2")}, parse_family("S[1]"), {1, 1}, {}, sp).value == 1);
    CHECK(spreading_constant(units, parse_family("S[0]"), {1, 8}, {}, sp).value == 1);
    for (int j = 1; j <= 3; ++j) CHECK(spreading_constant(units, sp.family(j), {1, 8}, {}, sp).value >= sp.theta(j));
    CHECK_THROWS_AS(spreading_constant(units, parse_family("S[1]"), {9, 12}, {}, sp), DomainError);
  }

  TEST_CASE("shift witnesses") {
    const auto sp = schreier_space();
    const auto w = lemma1_witness(Vector::unit(3), Vector::unit(2), 2, sp, {1, 4});
    REQUIRE(w);
    CHECK(w->e1 == FiniteSet{2});
    CHECK(w->lhs == 1);
    CHECK(w->rhs == 1);

    const auto [x, y] = lemma1_pair({Rational(1), Rational(1)}, {2, 3, 4});
    CHECK(x == parse_vector("3:1 4:1"));
    CHECK(y == parse_vector("2:1 3:1"));
    const auto w2 = lemma1_witness(x, y, 1, sp, {2, 4});
    REQUIRE(w2);
    CHECK(w2->lhs <= w2->rhs);

    CHECK_FALSE(lemma1_witness(Vector(), Vector(), 1, sp, {1, 3}));
    CHECK_THROWS_AS(lemma1_witness(Vector::unit(2), Vector::unit(3), 1, sp, {1, 4}), DomainError);
    CHECK_THROWS_AS(lemma1_witness(Vector::unit(3), Vector::unit(2), 1, sp, {3, 4}), DomainError);
  }

  TEST_CASE("shift witnesses on random pairs") {
    test::Rng rng(17);
    for (const auto& sp : test::test_spaces()) {
      for (int i = 0; i < 15; ++i) {
        const int r = 1 + i % 4;
        std::vector<Rational> coeffs;
        for (int k = 0; k < r; ++k) coeffs.push_back(test::random_coeff(rng));
        std::vector<int> idx;
        int at = 1;
        for (int k = 0; k <= r; ++k) idx.push_back(at += std::uniform_int_distribution<int>(1, 2)(rng));
        const auto [x, y] = lemma1_pair(coeffs, idx);
        const auto w = lemma1_witness(x, y, 2, sp, {1, idx.back()});
        CHECK(w.has_value());
      }
    }
  }

  TEST_CASE("schreier pi against compositions") {
    for (const auto& theta : {ThetaRule::geometric(Rational(1, 2)), ThetaRule::harmonic(Rational(1)),
                              ThetaRule::list({Rational(1, 2), Rational(1, 2), Rational(1, 5)}, Rational(1, 3))}) {
      CHECK(schreier_pi(theta, 0) == theta(1));
      for (int n = 1; n <= 10; ++n) CHECK(schreier_pi(theta, n) == pi_oracle(theta, n));
    }
  }

  TEST_CASE("default schedule") {
    const auto theta = ThetaRule::harmonic(Rational(1));
    const auto s = default_schedule(theta, 4);
    REQUIRE(s.size() == 4);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(schreier_pi(theta, s[i]) < pow(Rational(1, 2), static_cast<unsigned>(i + 1)));
      if (i > 0) CHECK(s[i] > s[i - 1]);
    }
  }

  TEST_CASE("schreier sum bound") {
    const auto sp = schreier_space();
    const auto one = schreier_sum_bound(Vector::unit(1), sp);
    CHECK(one.holds);
    CHECK(one.norm == 1);
    const auto two = schreier_sum_bound(parse_vector("2:1 3:1"), sp, {1, 3, 6});
    CHECK(two.holds);
    CHECK(two.pi.front() == 1);
    CHECK(two.pi.size() == 4);
    CHECK(two.bound == two.partial + two.tail);
    CHECK_THROWS_AS(schreier_sum_bound(Vector::unit(1), sp, {2, 2}), DomainError);
    CHECK_THROWS_AS(schreier_sum_bound(Vector::unit(1), sp, {0}), DomainError);

    test::Rng rng(19);
    for (int i = 0; i < 30; ++i) {
      const auto rep = schreier_sum_bound(test::random_vector(rng, 10, 5), sp);
      CHECK(rep.holds);
      for (std::size_t k = 1; k < rep.rho.size(); ++k) CHECK(rep.rho[k] >= rep.rho[k - 1]);
    }
  }

  TEST_CASE("ordinal rules") {
    CHECK(to_string(OrdinalRule::parse("w*n + 3")(2)) == "w*2 + 3");
    CHECK(to_string(OrdinalRule::parse("w^{n}")(3)) == "w^3");
    CHECK_THROWS_AS(OrdinalRule::parse("w^"), ParseError);
  }
}
