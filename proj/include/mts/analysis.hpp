#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mts/family.hpp"
#include "mts/norm.hpp"
#include "mts/ordinal.hpp"
#include "mts/rational.hpp"
#include "mts/space.hpp"
#include "mts/vector.hpp"

namespace mts {

/// n -> ordinal. The text form is an ordinal expression in one integer
/// variable, substituted literally before parsing: `n`, `n+1`, `2*n`,
/// `w^{n}`, `w*n + 3`.
class OrdinalRule {
 public:
  /// Throws ParseError if the expression does not parse at var = 1.
  static OrdinalRule parse(std::string_view text, char var = 'n');
  static OrdinalRule custom(std::string name, std::function<Ordinal(int)> fn);

  Ordinal operator()(int n) const { return fn_(n); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::function<Ordinal(int)> fn_;
};

enum class GammaMode {
  /// max beta_{n_s} + ... + beta_{n_1}
  ordinal_sum,
  /// max l(alpha_{n_s} * ... * alpha_{n_1})
  ell_of_product,
};

struct GammaConfig {
  GammaMode mode = GammaMode::ordinal_sum;
  ThetaRule theta = ThetaRule::geometric(Rational(1, 2));
  /// beta_n, or alpha_n in ell_of_product mode.
  OrdinalRule seq = OrdinalRule::parse("n");
  /// Cap on tuple entries and tuple length.
  int horizon = 256;
};

struct GammaResult {
  Ordinal value;
  /// False when a feasible tuple may use an entry or length beyond the
  /// horizon; value is then only a lower bound.
  bool complete = false;
  /// Entries actually searched: the least H with eps * theta_{H+1} <= theta_m,
  /// capped at the configured horizon.
  int horizon_used = 0;
  /// An optimal tuple, listed as (n_s, ..., n_1). Empty for max {} = 0.
  std::vector<int> tuple;
};

/// gamma(eps, m): maximum over finite tuples with eps * theta_{n_1} ...
/// theta_{n_s} > theta_m. Feasibility only sees the multiset, so multisets
/// are enumerated (products only shrink, which bounds the search) and each
/// one is ordered optimally: larger leading exponents first, and within a
/// group of equal leading exponent the element with the largest tail last.
GammaResult gamma_ordinal(const Rational& eps, int m, const GammaConfig& cfg);

struct DaggerEntry {
  Ordinal beta;
  std::optional<int> witness;
};

struct DaggerReport {
  std::vector<DaggerEntry> entries;
  /// gamma(eps, m) for m = 1..horizon.
  std::vector<GammaResult> gammas;
  /// Every gamma on 1..horizon was complete.
  bool all_complete = true;
};

/// For each beta, the least m <= horizon with gamma(eps,m) + 2 + beta <
/// l(alpha_m). Only complete gamma values are used, so a witness never
/// disappears under a larger horizon. A finite probe, not a proof.
DaggerReport dagger_probe(const Rational& eps, const std::vector<Ordinal>& betas, int horizon,
                          const GammaConfig& cfg, const OrdinalRule& ell_alpha);

struct RatioEntry {
  int m = 0;
  /// max_{1<=n<=H} theta_{m+n}/theta_n
  Rational sup;
  /// max over the tail window H/2 <= n <= H, a stand-in for limsup_n.
  Rational tail;
};

struct RootEntry {
  int n = 0;
  /// lo <= theta_n^{1/n} <= hi, dyadic endpoints, hi - lo <= 2^-20.
  Rational lo, hi;
};

struct DiagnosticsReport {
  int horizon = 0;
  std::vector<RatioEntry> ratio_profile;
  std::vector<RootEntry> root_profile;
  /// theta_{m+n} >= theta_m theta_n for m+n <= horizon.
  bool submultiplicative = true;
  bool submultiplicative_equality = true;
  std::optional<std::pair<int, int>> violation;
  /// Extrapolated verdict on lim_m limsup_n theta_{m+n}/theta_n > 0.
  bool ratio_limit_positive = false;
  /// Always "horizon": the verdict is read off a finite window.
  std::string certainty = "horizon";
};

DiagnosticsReport theta_diagnostics(const ThetaRule& theta, int horizon);
DiagnosticsReport theta_diagnostics(const SpaceSpec& sp, int horizon);

struct TameResult {
  bool pass = true;
  int n = 0;
  /// 1: F_n[A_3] in (F_n)^2; 2: (F_n - F_{n0})[A_2] in F_n.
  int clause = 0;
  std::optional<FiniteSet> counterexample;
};

/// Both tameness clauses for n <= n_max (clause 2 for n0 < n), on {1..N}.
/// Clause 1 holds outright when F_n is some A_j. probe_bound defaults to N.
TameResult tame_check(const std::function<Family(int)>& families, int n0, int n_max, int universe,
                      std::optional<int> probe_bound = std::nullopt);

struct SpreadingResult {
  Rational value;
  FiniteSet argmin;
};

/// min over nonempty F in `family`, F within [lo, hi] and within the block
/// indices, of ||sum_{k in F} a_k x_k|| / sum |a_k|. Blocks are numbered
/// from 1; empty coeffs means all ones.
SpreadingResult spreading_constant(const std::vector<Vector>& blocks, const Family& family, std::pair<int, int> window,
                                   const std::vector<Rational>& coeffs, const SpaceSpec& sp);

struct Lemma1Witness {
  FiniteSet e1, e2, e3;
  Rational lhs;  // ||x||_m
  Rational rhs;  // sum ||E_i y||_m
};

/// x = sum a_k e_{i_{k+1}}, y = sum a_k e_{i_k}.
std::pair<Vector, Vector> lemma1_pair(const std::vector<Rational>& coeffs, const std::vector<int>& indices);

/// Sets E_1 < E_2 < E_3 (possibly empty) cutting the support of y, with
/// ||x||_m <= sum ||E_i y||_m. Larger E_1, then larger E_2, are tried first.
/// Throws DomainError if (x, y) is not a shifted pair or y leaves the
/// universe.
std::optional<Lemma1Witness> lemma1_witness(const Vector& x, const Vector& y, int m, const SpaceSpec& sp,
                                            std::pair<int, int> universe);

struct SchreierSumReport {
  std::vector<int> schedule;
  /// pi_0 = 1, pi_1, ..., pi_I
  std::vector<Rational> pi;
  /// rho_1, ..., rho_I
  std::vector<Rational> rho;
  Rational norm;
  /// sum_{i<=I} pi_{i-1} rho_i
  Rational partial;
  /// 2^{1-I} ||x||_{l1} bounds the omitted terms since pi_{i-1} < 2^{1-i}
  /// and rho_i <= ||x||_{l1}.
  Rational tail;
  Rational bound;  // partial + tail
  bool holds = false;
  bool partial_holds = false;
};

/// pi(n) = max theta_{m_1}...theta_{m_r} over m_1 + ... + m_r > n.
Rational schreier_pi(const ThetaRule& theta, int n);
/// Least strictly increasing n_1 < ... < n_terms with pi(n_i) < 2^-i.
std::vector<int> default_schedule(const ThetaRule& theta, int terms);

/// Throws DomainError if the schedule is not strictly increasing or some
/// pi(n_i) >= 2^-i. Empty schedule means default_schedule(|supp x| + 1).
SchreierSumReport schreier_sum_bound(const Vector& x, const SpaceSpec& sp, std::vector<int> schedule = {});

}  // namespace mts
