#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mts/ordinal.hpp"

namespace mts {

/// Strictly increasing list of positive integers (basis indices).
using FiniteSet = std::vector<int>;

/// Throws DomainError unless `s` is strictly increasing with elements >= 1.
void validate_set(const FiniteSet& s);
std::string to_string(const FiniteSet& s);
/// Comma separated (`3,5,9`), optionally wrapped in braces; empty for {}.
FiniteSet parse_set(std::string_view text);

/// A strictly increasing integer sequence p_1 < p_2 < ..., used both as the
/// infinite set M in F|M and as the renumbering (p_k) in F@M.
/// A finite list is a prefix: questions about integers past its end are
/// undecidable and raise ConfigError.
class IndexSequence {
 public:
  enum class Kind { arithmetic, list, powers };

  static IndexSequence arithmetic(int first, int step);
  static IndexSequence list(std::vector<int> values);
  static IndexSequence powers(int base);

  Kind kind() const { return kind_; }
  /// p_k for k >= 1; nullopt when not determined by the rule.
  std::optional<long long> at(int k) const;
  /// Whether v occurs in the sequence; nullopt when not determined.
  std::optional<bool> contains(long long v) const;

  friend bool operator==(const IndexSequence&, const IndexSequence&) = default;

 private:
  Kind kind_ = Kind::arithmetic;
  int first_ = 1;
  int step_ = 1;
  std::vector<int> values_;
  friend std::string to_string(const IndexSequence&);
};

std::string to_string(const IndexSequence& m);
IndexSequence parse_index_sequence(std::string_view text);

struct FamilyNode;

/// Immutable handle to a symbolic family of finite subsets of N.
/// Copies share structure.
class Family {
 public:
  enum class Kind {
    ank,
    schreier,
    apply,
    pair_sum,
    power,
    union_of,
    minus,
    restrict,
    renumber,
    explicit_sets,
  };

  /// S_0: the empty set and singletons.
  static Family singletons();
  static Family ank(int k);
  static Family schreier(Ordinal alpha);
  /// F[G]: unions of G-sets whose sequence is F-admissible.
  static Family apply(Family f, Family g);
  /// (F,G) = {F u G : F < G}.
  static Family pair_sum(Family f, Family g);
  /// (F)^n with (F)^1 = F, (F)^{n+1} = (F, (F)^n).
  static Family power(Family f, int n);
  static Family union_of(Family f, Family g);
  /// F (-) G: sets s with a maximal G' in G, G' < s, G' u s in F.
  static Family minus(Family f, Family g);
  static Family restrict(Family f, IndexSequence m);
  /// M F = {s : (p_k)_{k in s} in F}.
  static Family renumber(Family f, IndexSequence m);
  /// Hereditary closure of the listed sets.
  static Family explicit_sets(const std::vector<FiniteSet>& sets);

  Kind kind() const;
  int k() const;                 // ank
  const Ordinal& alpha() const;  // schreier
  const Family& lhs() const;     // apply, pair_sum, power, union_of, minus, restrict, renumber
  const Family& rhs() const;     // apply, pair_sum, union_of, minus
  int exponent() const;          // power
  const IndexSequence& sequence() const;        // restrict, renumber
  const std::vector<FiniteSet>& sets() const;   // explicit_sets, sorted

  /// Built only from ank/schreier/apply/pair_sum/power/union_of. These are
  /// hereditary and spreading and admit an incremental scanner.
  bool norm_grade() const;

  /// Children of Schreier nodes: S_1[S_b] for successors a = b+1 and
  /// S_{a[n]} for limits. Cached per node.
  Family schreier_predecessor() const;
  Family schreier_branch(std::uint64_t n) const;

  const FamilyNode* node() const { return node_.get(); }
  friend bool operator==(const Family& a, const Family& b);

 private:
  explicit Family(std::shared_ptr<const FamilyNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const FamilyNode> node_;
};

std::string to_string(const Family& f);
/// Grammar: S[a], A[k], F.apply(G), (F,G), F^n, F-G, F|M, F@M, union(F,G),
/// explicit({1,2},{3}). Parentheses group. Throws ParseError.
Family parse_family(std::string_view text);

struct MemberOptions {
  /// Extension probes used to test maximality in F-G reach max(G')+probe_bound.
  int probe_bound = 16;
};

bool member(const Family& f, const FiniteSet& s, const MemberOptions& opts = {});

/// All members contained in {1..n}, depth-first with hereditary pruning,
/// in lexicographic order (a set precedes its extensions).
std::vector<FiniteSet> enumerate_members(const Family& f, int n, const MemberOptions& opts = {});

/// No proper superset using integers up to max(s)+probe_bound is a member.
/// Requires member(f, s).
bool is_maximal(const Family& f, const FiniteSet& s, int probe_bound,
                const MemberOptions& opts = {});

/// Sets must be nonempty and pairwise ordered E_1 < E_2 < ...
bool is_admissible(const Family& f, const std::vector<FiniteSet>& sets,
                   const MemberOptions& opts = {});

struct SubsetResult {
  bool holds = true;
  std::optional<FiniteSet> counterexample;
};

/// F n [{1..n}]^{<inf} subset of G. First counterexample in lexicographic
/// order. The member checks against G run in parallel.
SubsetResult subset_check(const Family& f, const Family& g, int n, const MemberOptions& opts = {});
/// Serial reference for subset_check.
SubsetResult subset_check_serial(const Family& f, const Family& g, int n,
                                 const MemberOptions& opts = {});

struct IndexBound {
  Ordinal value;
  bool exact = false;
};

/// Symbolic upper bound for the Cantor-Bendixson index.
IndexBound index_bound(const Family& f);

}  // namespace mts
