#include "doctest.h"
#include "mts/certificate.hpp"
#include "mts/errors.hpp"
#include "mts/norm.hpp"
#include "support.hpp"

using namespace mts;

namespace {
Vector v(const char* s) { return parse_vector(s); }

std::string cert_text(const NormResult& r) { return certificate_to_json(r.cert, 0); }
}  // namespace

TEST_SUITE("norm") {
  TEST_CASE("level norm examples") {
    const auto sp = schreier_space();
    CHECK(level_norm(v("1:1 2:1"), sp, 0) == 1);
    CHECK(level_norm(v("2:1 3:1"), sp, 1) == 1);
    for (int m = 0; m < 4; ++m) CHECK(level_norm(v("7:1"), sp, m) == 1);
  }

  TEST_CASE("norm examples") {
    const auto sp = schreier_space();
    const auto unit = norm(Vector::unit(5), sp);
    CHECK(unit.value == 1);
    CHECK(unit.cert.root.set == FiniteSet{5});
    CHECK(unit.cert.root.is_leaf());
    CHECK(norm(v("4:3/2"), sp).value == Rational(3, 2));
    const auto pair = norm(v("2:1 3:1"), sp);
    CHECK(pair.value == 1);
    // a tie between the leaf and the split at level 1: the leaf wins
    CHECK(pair.cert.root.is_leaf());
    CHECK(brute_force_norm(v("2:1 3:1 4:1"), sp) == norm(v("2:1 3:1 4:1"), sp).value);
  }

  TEST_CASE("a split that beats the c0 leaf") {
    // {3,4,5} is S_1-admissible: (1/2)*3 > 1
    const auto r = norm(v("3:1 4:1 5:1"), schreier_space());
    CHECK(r.value == Rational(3, 2));
    REQUIRE(r.cert.root.children.size() == 3);
    CHECK(r.cert.root.level == 1);
    CHECK(r.cert.root.children[0].tag == Rational(1, 2));
  }

  TEST_CASE("zero vector") {
    const auto r = norm(Vector(), schreier_space());
    CHECK(r.value == 0);
    CHECK(r.cert.root.set.empty());
    CHECK(verify_certificate(r.cert, Vector(), schreier_space()).valid);
    CHECK(brute_force_norm(Vector(), schreier_space()) == 0);
    CHECK(level_norm(Vector(), schreier_space(), 3) == 0);
  }

  TEST_CASE("brute force guard") {
    CHECK(brute_force_norm(Vector::unit(5), schreier_space()) == 1);
    CHECK_THROWS_AS(brute_force_norm(v("1:1 2:1 3:1 4:1 5:1 6:1 7:1 8:1 9:1"), schreier_space()), DomainError);
  }

  TEST_CASE("serial and parallel agree, certificates included") {
    test::Rng rng(3);
    for (const auto& sp : test::test_spaces()) {
      std::vector<Vector> xs;
      for (int i = 0; i < 60; ++i) xs.push_back(test::random_vector(rng, 14, 9));
      const auto par = norm_batch(xs, sp);
      const auto ser = norm_batch_serial(xs, sp);
      REQUIRE(par.size() == xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        CAPTURE(to_string(xs[i]));
        CHECK(par[i].value == ser[i].value);
        CHECK(cert_text(par[i]) == cert_text(ser[i]));
        const auto single = norm(xs[i], sp);
        CHECK(single.value == ser[i].value);
        CHECK(cert_text(single) == cert_text(norm_serial(xs[i], sp)));
      }
    }
  }

  TEST_CASE("matches the oracle on random vectors with signs") {
    test::Rng rng(5);
    for (const auto& sp : test::test_spaces()) {
      for (int i = 0; i < 40; ++i) {
        const Vector x = test::random_vector(rng, 10, 6);
        CAPTURE(to_string(x));
        const auto r = norm(x, sp);
        CHECK(r.value == brute_force_norm(x, sp));
        const auto check = verify_certificate(r.cert, x, sp);
        CHECK(check.valid);
        CHECK(check.value == r.value);
        CHECK(level_norm(x, sp, static_cast<int>(x.support_size())) == r.value);
      }
    }
  }

  TEST_CASE("distortion norm") {
    const auto sp = schreier_space();
    CHECK(distortion_norm(v("2:1 3:1"), sp, 1) == 2);
    CHECK(distortion_norm(Vector::unit(1), sp, 3) == 1);
    test::Rng rng(9);
    for (int i = 0; i < 30; ++i) {
      const Vector x = test::random_vector(rng, 10, 6);
      const int n = 1 + i % 3;
      const Rational d = distortion_norm(x, sp, n);
      const Rational nx = norm(x, sp).value;
      CHECK(nx >= sp.theta(n) * d);
      CHECK(d >= nx);
    }
  }
}

TEST_SUITE("certificate") {
  TEST_CASE("verify examples") {
    const auto sp = schreier_space();
    NormCertificate leaf{CertNode{{2}, std::nullopt, 1, {}}};
    auto c = verify_certificate(leaf, Vector::unit(2), sp);
    CHECK(c.valid);
    CHECK(c.value == 1);

    NormCertificate split{CertNode{{2, 3}, 1, 1, {CertNode{{2}, std::nullopt, Rational(1, 2), {}}, CertNode{{3}, std::nullopt, Rational(1, 2), {}}}}};
    c = verify_certificate(split, v("2:1 3:1"), sp);
    CHECK(c.valid);
    CHECK(c.value == 1);

    NormCertificate bad{CertNode{{1, 2}, 1, 1, {CertNode{{1}, std::nullopt, Rational(1, 2), {}}, CertNode{{2}, std::nullopt, Rational(1, 2), {}}}}};
    c = verify_certificate(bad, v("1:1 2:1"), sp);
    CHECK_FALSE(c.valid);
    CHECK_FALSE(c.reason.empty());
    CHECK(c.value == 1);
  }

  TEST_CASE("tampered certificates are rejected") {
    const auto sp = schreier_space();
    const Vector x = v("3:1 4:1 5:1");
    auto cert = norm(x, sp).cert;
    REQUIRE(cert.root.children.size() == 3);

    auto wrong_tag = cert;
    wrong_tag.root.children[1].tag = 1;
    CHECK_FALSE(verify_certificate(wrong_tag, x, sp).valid);

    auto unordered = cert;
    std::swap(unordered.root.children[0], unordered.root.children[1]);
    CHECK_FALSE(verify_certificate(unordered, x, sp).valid);

    auto escaping = cert;
    escaping.root.children[2].set = {6};
    CHECK_FALSE(verify_certificate(escaping, x, sp).valid);

    auto root_tag = cert;
    root_tag.root.tag = Rational(1, 2);
    CHECK_FALSE(verify_certificate(root_tag, x, sp).valid);
  }

  TEST_CASE("json round trip") {
    test::Rng rng(13);
    const auto sp = schreier_space();
    for (int i = 0; i < 30; ++i) {
      const Vector x = test::random_vector(rng, 12, 8);
      const auto r = norm(x, sp);
      const std::string text = certificate_to_json(r.cert);
      const auto back = certificate_from_json(text);
      CHECK(certificate_to_json(back) == text);
      const auto check = verify_certificate(back, x, sp);
      CHECK(check.valid);
      CHECK(check.value == r.value);
      CHECK(evaluate(back, x) == r.value);
    }
  }

  TEST_CASE("malformed json") {
    CHECK_THROWS_AS(certificate_from_json("{"), ParseError);
    CHECK_THROWS_AS(certificate_from_json(R"({"set":[1],"tag":"x","children":[]})"), ParseError);
    CHECK_THROWS_AS(certificate_from_json(R"({"tag":"1/1","children":[]})"), ParseError);
  }
}
