#pragma once

#include <span>
#include <vector>

#include "mts/certificate.hpp"
#include "mts/rational.hpp"
#include "mts/space.hpp"
#include "mts/vector.hpp"

namespace mts {

struct NormResult {
  Rational value;
  NormCertificate cert;
};

/// ||x|| with an optimal norming tree.
///
/// Interval DP over the support: since admissibility depends only on the
/// minima and families are spreading, every admissible sequence can be
/// replaced by consecutive support intervals starting at support points
/// without lowering the sum, so only O(k^2) cells are needed. A split at
/// level n is worth at most theta_n * ||.||_{l1}, so levels stop as soon as
/// that bound cannot beat the cell's best. Cells of equal length are
/// independent and are filled in parallel.
///
/// Ties prefer a leaf, then the smaller level, then the lexicographically
/// earliest breakpoint sequence, so the certificate is deterministic.
NormResult norm(const Vector& x, const SpaceSpec& sp);
/// Same DP, single thread.
NormResult norm_serial(const Vector& x, const SpaceSpec& sp);

/// Norms of many vectors, one task per vector.
std::vector<NormResult> norm_batch(std::span<const Vector> xs, const SpaceSpec& sp);
std::vector<NormResult> norm_batch_serial(std::span<const Vector> xs, const SpaceSpec& sp);

/// ||x||_m of the iterated definition, ||x||_0 = ||x||_{c0}. Stabilizes at
/// the norm once m >= |supp x|: a strict increase needs a split into at
/// least two pieces, so optimal trees have depth below |supp x|.
Rational level_norm(const Vector& x, const SpaceSpec& sp, int m);

/// Independent oracle: recursion on the implicit norm equation over all
/// admissible sequences of arbitrary subsets of the support; no interval
/// reduction, no memo table. Requires |supp x| <= 8.
Rational brute_force_norm(const Vector& x, const SpaceSpec& sp);
inline constexpr std::size_t kBruteForceMaxSupport = 8;

/// |||x|||_n = sup of sum ||E_i x|| over F_n-admissible (E_i).
Rational distortion_norm(const Vector& x, const SpaceSpec& sp, int n);

}  // namespace mts
