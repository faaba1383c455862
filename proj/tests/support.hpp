#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "mts/family.hpp"
#include "mts/ordinal.hpp"
#include "mts/rational.hpp"
#include "mts/space.hpp"
#include "mts/vector.hpp"

namespace mts::test {

using Rng = std::mt19937_64;

/// Every vector with support in {1..n} and coefficients in {1, 1/2, 2}.
inline std::vector<Vector> sweep_vectors(int n = 6) {
  const Rational values[] = {Rational(1), Rational(1, 2), Rational(2)};
  std::vector<Vector> out;
  std::vector<int> digit(static_cast<std::size_t>(n), 0);  // 0 = absent, 1..3 = values[d-1]
  for (;;) {
    std::vector<Vector::Entry> e;
    for (int k = 0; k < n; ++k)
      if (digit[static_cast<std::size_t>(k)] > 0)
        e.emplace_back(k + 1, values[digit[static_cast<std::size_t>(k)] - 1]);
    out.emplace_back(std::move(e));
    int k = 0;
    while (k < n && digit[static_cast<std::size_t>(k)] == 3) digit[static_cast<std::size_t>(k++)] = 0;
    if (k == n) break;
    ++digit[static_cast<std::size_t>(k)];
  }
  return out;
}

inline std::vector<SpaceSpec> test_spaces() { return {schreier_space(), harmonic_s1_space(), ank_space()}; }

inline Rational random_coeff(Rng& rng) {
  static const int nums[] = {1, -1, 1, -1, 2, -2, 3, -3, 5};
  static const int dens[] = {1, 2, 3, 4};
  std::uniform_int_distribution<int> a(0, 8), b(0, 3);
  Rational r(nums[a(rng)], dens[b(rng)]);
  r.canonicalize();
  return r;
}

/// Random vector with support inside {1..universe} of size <= max_support.
inline Vector random_vector(Rng& rng, int universe, int max_support) {
  std::uniform_int_distribution<int> size_dist(0, max_support);
  std::vector<int> idx(static_cast<std::size_t>(universe));
  for (int i = 0; i < universe; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(idx.begin(), idx.end(), rng);
  const int size = std::min(size_dist(rng), universe);
  std::vector<Vector::Entry> e;
  for (int i = 0; i < size; ++i) e.emplace_back(idx[static_cast<std::size_t>(i)], random_coeff(rng));
  return Vector(std::move(e));
}

inline FiniteSet random_subset(Rng& rng, int universe) {
  FiniteSet s;
  std::bernoulli_distribution coin(0.5);
  for (int k = 1; k <= universe; ++k)
    if (coin(rng)) s.push_back(k);
  return s;
}

/// Random ordinal in normal form with exponent depth <= depth and
/// coefficients in 1..9.
inline Ordinal random_ordinal(Rng& rng, int depth) {
  std::uniform_int_distribution<int> terms_dist(0, 3), coeff(1, 9), finite(0, 9);
  if (depth == 0) return Ordinal::finite(static_cast<std::uint64_t>(finite(rng)));
  std::vector<OrdinalTerm> terms;
  const int count = terms_dist(rng);
  for (int i = 0; i < count; ++i)
    terms.push_back({random_ordinal(rng, depth - 1), static_cast<std::uint64_t>(coeff(rng))});
  std::sort(terms.begin(), terms.end(), [](const OrdinalTerm& a, const OrdinalTerm& b) { return a.exponent > b.exponent; });
  return Ordinal::from_terms(std::move(terms));
}

}  // namespace mts::test
