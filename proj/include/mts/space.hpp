#pragma once

#include <functional>
#include <mutex>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mts/family.hpp"
#include "mts/rational.hpp"

namespace mts {

/// n -> theta_n for n >= 1.
///   geometric r      theta_n = r^n
///   harmonic c       theta_n = 1/(n+c)
///   list L tail r    theta_n = L_n for n <= |L|, then L_last * r^(n-|L|)
class ThetaRule {
 public:
  enum class Kind { geometric, harmonic, list };

  static ThetaRule geometric(Rational ratio);
  static ThetaRule harmonic(Rational shift);
  static ThetaRule list(std::vector<Rational> head, Rational tail_ratio);

  Kind kind() const { return kind_; }
  Rational operator()(int n) const;

 private:
  Kind kind_ = Kind::geometric;
  Rational param_;
  std::vector<Rational> head_;
  friend std::string to_string(const ThetaRule&);
};

std::string to_string(const ThetaRule& t);
/// `geometric 1/2`, `harmonic 1`, `list 1/2,1/3 tail geometric 1/2`.
ThetaRule parse_theta_rule(std::string_view text);

/// n -> F_n.
///   schreier n+c     F_n = S_{n+c}
///   ank a*n+b        F_n = A_{a n + b}
///   const F          F_n = F
/// A custom callable may be supplied from code.
class FamilyRule {
 public:
  static FamilyRule schreier(int shift);
  static FamilyRule ank(int scale, int shift);
  static FamilyRule constant(Family f);
  static FamilyRule custom(std::string name, std::function<Family(int)> fn);

  Family operator()(int n) const { return fn_(n); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::function<Family(int)> fn_;
};

FamilyRule parse_family_rule(std::string_view text);

/// The data (theta_n, F_n) of a mixed Tsirelson space. Families are built
/// lazily and cached; all accessors are safe to call concurrently.
class SpaceSpec {
 public:
  /// Validates 0 < theta_n < 1, theta nonincreasing, and each F_n norm-grade
  /// with index bound > 1, for n = 1..horizon. Throws ConfigError.
  SpaceSpec(ThetaRule theta, FamilyRule families, int horizon = 64);

  Rational theta(int n) const;
  Family family(int n) const;
  int horizon() const { return horizon_; }
  const ThetaRule& theta_rule() const { return theta_rule_; }
  const FamilyRule& family_rule() const { return family_rule_; }

  /// Config-file text that parses back to this space.
  std::string to_config() const;

 private:
  ThetaRule theta_rule_;
  FamilyRule family_rule_;
  int horizon_;
  struct Cache {
    std::mutex mu;
    std::vector<Rational> theta;          // theta[n-1]
    std::map<int, Family> families;
  };
  std::shared_ptr<Cache> cache_;
};

/// `key = value` lines (`theta`, `family`, `horizon`), `#` comments.
/// Throws ParseError with line/column, or ConfigError naming the first
/// violated invariant.
SpaceSpec parse_space_spec(std::string_view text);

/// Test spaces used throughout: T[(2^-n, S_n)], T[(1/(n+1), S_1)],
/// T[(2^-n, A_{n+1})].
SpaceSpec schreier_space();
SpaceSpec harmonic_s1_space();
SpaceSpec ank_space();

}  // namespace mts
