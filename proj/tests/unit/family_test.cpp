#include <functional>

#include "doctest.h"
#include "mts/errors.hpp"
#include "mts/family.hpp"
#include "support.hpp"

using namespace mts;

namespace {

Family f(const char* s) { return parse_family(s); }

bool in_s1(const FiniteSet& s) { return s.empty() || static_cast<int>(s.size()) <= s.front(); }

// S_{k+1} by exhaustive decomposition into consecutive S_k blocks whose
// minima form an S_1 set.
bool in_schreier(int k, const FiniteSet& s) {
  if (k == 0) return s.size() <= 1;
  if (s.empty()) return true;
  std::function<bool(std::size_t, FiniteSet&)> go = [&](std::size_t pos, FiniteSet& minima) {
    if (pos == s.size()) return in_s1(minima);
    for (std::size_t end = pos + 1; end <= s.size(); ++end) {
      const FiniteSet block(s.begin() + static_cast<std::ptrdiff_t>(pos), s.begin() + static_cast<std::ptrdiff_t>(end));
      if (!in_schreier(k - 1, block)) continue;
      minima.push_back(block.front());
      const bool ok = in_s1(minima) && go(end, minima);
      minima.pop_back();
      if (ok) return true;
    }
    return false;
  };
  FiniteSet minima;
  return go(0, minima);
}

std::vector<FiniteSet> all_subsets(int n) {
  std::vector<FiniteSet> out;
  for (unsigned mask = 0; mask < (1U << n); ++mask) {
    FiniteSet s;
    for (int b = 0; b < n; ++b)
      if (mask >> b & 1U) s.push_back(b + 1);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_SUITE("family") {
  TEST_CASE("member examples") {
    CHECK(member(f("S[1]"), {3, 5, 9}));
    CHECK_FALSE(member(f("S[1]"), {2, 4, 6}));
    CHECK(member(f("S[2]"), {2, 3, 4, 5, 6}));
    CHECK(member(f("A[5]-A[2]"), {3, 4, 5}));
    CHECK_FALSE(member(f("A[5]-A[2]"), {1, 2}));
    CHECK(member(f("S[0]"), {9}));
    CHECK_FALSE(member(f("S[0]"), {1, 2}));
    CHECK(member(f("S[1]"), {}));
  }

  TEST_CASE("schreier hierarchy against block decomposition") {
    for (int k = 0; k <= 3; ++k) {
      const Family fam = Family::schreier(Ordinal::finite(static_cast<std::uint64_t>(k)));
      for (const auto& s : all_subsets(10)) {
        CAPTURE(k);
        CAPTURE(to_string(s));
        CHECK(member(fam, s) == in_schreier(k, s));
      }
    }
  }

  TEST_CASE("successor equals S_1 applied to its predecessor") {
    for (const auto& s : all_subsets(10)) {
      CHECK(member(f("S[2]"), s) == member(f("S[1].apply(S[1])"), s));
      CHECK(member(f("S[w+1]"), s) == member(f("S[1].apply(S[w])"), s));
    }
  }

  TEST_CASE("limit Schreier uses the fundamental sequence at min") {
    // S_w = {F : F in S_{min F}}
    for (const auto& s : all_subsets(10)) {
      const bool expect = s.empty() || in_schreier(s.front(), s);
      CHECK(member(f("S[w]"), s) == expect);
    }
  }

  TEST_CASE("enumerate") {
    const auto s1 = enumerate_members(f("S[1]"), 4);
    const std::vector<FiniteSet> expect{{}, {1}, {2}, {2, 3}, {2, 4}, {3}, {3, 4}, {4}};
    CHECK(s1 == expect);
    CHECK(enumerate_members(f("A[1]"), 2) == std::vector<FiniteSet>{{}, {1}, {2}});
    const auto a = enumerate_members(f("A[2].apply(A[3])"), 7);
    CHECK(a.size() == 127);
    CHECK(a == enumerate_members(f("A[6]"), 7));
    CHECK_THROWS_AS(enumerate_members(f("S[1]"), 0), DomainError);
  }

  TEST_CASE("A_j[A_3] = A_3j") {
    for (int j = 1; j <= 3; ++j) {
      const Family lhs = Family::apply(Family::ank(j), Family::ank(3));
      for (const auto& s : all_subsets(12)) CHECK(member(lhs, s) == (static_cast<int>(s.size()) <= 3 * j));
    }
  }

  TEST_CASE("is_maximal") {
    CHECK(is_maximal(f("S[1]"), {2, 3}, 16));
    CHECK_FALSE(is_maximal(f("S[1]"), {3, 4}, 16));
    CHECK(is_maximal(f("A[1]"), {7}, 16));
    CHECK_THROWS_AS(is_maximal(f("S[1]"), {1, 2}, 16), DomainError);
  }

  TEST_CASE("is_admissible") {
    CHECK(is_admissible(f("S[1]"), {{3, 4}, {7}}));
    CHECK_FALSE(is_admissible(f("S[1]"), {{1}, {2}}));
    CHECK(is_admissible(f("S[2]"), {{2, 5}, {6}, {9}}));
    CHECK_THROWS_AS(is_admissible(f("S[1]"), {{3, 5}, {4}}), DomainError);
    CHECK_THROWS_AS(is_admissible(f("S[1]"), {{3}, {}}), DomainError);
  }

  TEST_CASE("subset_check") {
    CHECK(subset_check(f("S[1].apply(A[3])"), f("S[1]^2"), 10).holds);
    CHECK(subset_check(f("A[2]"), f("A[3]"), 10).holds);
    CHECK(subset_check(f("(S[2]-S[1]).apply(A[2])"), f("S[2]"), 10).holds);
    const auto r = subset_check(f("A[3]"), f("A[2]"), 5);
    CHECK_FALSE(r.holds);
    REQUIRE(r.counterexample);
    CHECK(*r.counterexample == FiniteSet{1, 2, 3});
  }

  TEST_CASE("subset_check parallel matches serial") {
    const char* pairs[][2] = {{"S[2]", "S[1]^3"}, {"A[4]", "S[1]^2"}, {"S[1].apply(A[2])", "S[2]"}, {"(S[1],A[2])", "S[1]^2"}};
    for (const auto& p : pairs) {
      const auto a = subset_check(f(p[0]), f(p[1]), 11);
      const auto b = subset_check_serial(f(p[0]), f(p[1]), 11);
      CHECK(a.holds == b.holds);
      CHECK(a.counterexample == b.counterexample);
    }
  }

  TEST_CASE("hereditary and spreading on {1..10}") {
    const char* fams[] = {"S[2]", "S[w]", "A[3].apply(S[1])", "(S[1],A[2])", "S[1]^3", "union(A[2],S[1])", "S[w+1]"};
    const auto subsets = all_subsets(10);
    for (const char* name : fams) {
      const Family fam = f(name);
      CAPTURE(name);
      for (const auto& s : subsets) {
        if (!member(fam, s)) continue;
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
          FiniteSet t = s;
          t.erase(t.begin() + static_cast<std::ptrdiff_t>(drop));
          CHECK(member(fam, t));
        }
        // shift the last element right, and every element right by one
        if (!s.empty() && s.back() < 10) {
          FiniteSet t = s;
          ++t.back();
          CHECK(member(fam, t));
          FiniteSet u = s;
          for (auto& v : u) ++v;
          CHECK(member(fam, u));
        }
      }
    }
  }

  TEST_CASE("renumber consistency") {
    const IndexSequence seqs[] = {IndexSequence::arithmetic(2, 3), IndexSequence::powers(2), IndexSequence::list({1, 4, 5, 9, 11, 20, 21, 30})};
    for (const auto& m : seqs) {
      const Family r = Family::renumber(f("S[1]^2"), m);
      for (const auto& s : all_subsets(8)) {
        FiniteSet image;
        for (int k : s) image.push_back(static_cast<int>(*m.at(k)));
        CHECK(member(r, s) == member(f("S[1]^2"), image));
      }
    }
  }

  TEST_CASE("restrict needs a decidable rule") {
    const Family r = Family::restrict(f("S[1]"), IndexSequence::list({2, 4, 6}));
    CHECK(member(r, {2, 4}));
    CHECK_FALSE(member(r, {3}));
    CHECK_THROWS_AS(member(r, {8}), ConfigError);
  }

  TEST_CASE("explicit sets are closed under subsets") {
    const Family e = f("explicit({1,2},{3})");
    CHECK(member(e, {1}));
    CHECK(member(e, {}));
    CHECK_FALSE(member(e, {1, 3}));
  }

  TEST_CASE("index bounds") {
    CHECK(to_string(index_bound(f("S[2]")).value) == "w^2");
    CHECK(index_bound(f("S[2]")).exact);
    CHECK(to_string(index_bound(f("A[4]")).value) == "4");
    CHECK(index_bound(f("A[4]")).exact);
    CHECK(to_string(index_bound(f("S[1].apply(S[1])")).value) == "w^2");
    CHECK_FALSE(index_bound(f("S[1].apply(S[1])")).exact);
    CHECK(to_string(index_bound(f("S[1]^2")).value) == "w*2");
    CHECK_THROWS(index_bound(f("S[1]-A[2]")));
  }

  TEST_CASE("text round trip") {
    for (const char* s : {"S[1]", "A[3]", "S[w^2 + 1]", "S[1].apply(A[3])", "(S[1],A[2])", "S[2]^3", "union(S[1],A[2])",
                          "S[2]-S[1]", "explicit({1,2},{3})"})
      CHECK(to_string(parse_family(s)) == s);
    CHECK(to_string(parse_set("{3, 5,9}")) == "{3,5,9}");
    CHECK(parse_set("").empty());
    CHECK_THROWS_AS(parse_family("S[1"), ParseError);
    CHECK_THROWS_AS(parse_family("Q[1]"), ParseError);
    CHECK_THROWS_AS(parse_set("3,2"), ParseError);
  }
}
