#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mts/family.hpp"

namespace mts {

struct ScanCache;

/// Incremental left-to-right admissibility test for norm-grade families.
///
/// Feed the minima m_1 < m_2 < ... one at a time. The scanner tracks every
/// live configuration of the nondeterministic reading (block boundaries
/// for F[G], the split point for (F,G), the branch for unions and limit
/// Schreier families) as a deduplicated state set, so backtracking is
/// implicit. Copy the scanner to branch a search; copies share a memo
/// cache guarded by a mutex.
class AdmissibilityScanner {
 public:
  /// Throws ConfigError unless `f.norm_grade()`.
  explicit AdmissibilityScanner(Family f);

  /// Appends m (must exceed the previous element). Returns false and
  /// leaves the state untouched if the extended set is not a member.
  bool extend(int m);
  /// True iff the set read so far is a member. Norm-grade families are
  /// hereditary, so this holds after any sequence of accepted extends.
  bool accept() const { return fallback_ || !states_.empty(); }

  std::size_t length() const { return length_; }
  int last() const { return last_; }
  /// 0 once the scanner has fallen back to member() on the prefix.
  std::size_t live_states() const { return states_.size(); }
  bool fallback() const { return fallback_; }
  const Family& family() const { return family_; }

  using State = std::vector<std::int32_t>;

 private:
  Family family_;
  std::vector<State> states_;
  std::size_t length_ = 0;
  int last_ = 0;
  std::vector<int> prefix_;
  bool fallback_ = false;
  std::shared_ptr<ScanCache> cache_;

  bool extend_by_member(int m);
};

}  // namespace mts
