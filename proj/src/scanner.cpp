#include "mts/scanner.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <span>
#include <tuple>

#include "mts/errors.hpp"

namespace mts {

namespace {

using State = AdmissibilityScanner::State;
using View = std::span<const std::int32_t>;

// Flat state encodings, one per constructor:
//   ank / S_0      [count]
//   S_1            [count, min]
//   S_{b+1}        [pieces, min, set id] for b >= 1: the greedy cut into
//                  longest S_b pieces, which needs the fewest pieces since
//                  S_b is hereditary; the current piece is kept as its whole
//                  S_b state set, interned in the cache, so this level is
//                  deterministic
//   S_limit        [0] before the first element, then [n, S_{a[n]} state]
//   F[G]           [open, |F state|, F state, G state if open]
//   (F,G)          [phase, F state | G state]
//   F^n            [piece index, F state]
//   union(F,G)     [branch, F state | G state]

void initial(const Family& f, std::vector<State>& out);
void step(const Family& f, View st, int m, std::vector<State>& out);
void first_step(const Family& f, int m, std::vector<State>& out);

}  // namespace

struct ScanCache {
  std::mutex mutex;
  std::map<std::vector<State>, std::int32_t> ids;
  std::vector<std::vector<State>> sets;
  std::map<std::pair<const FamilyNode*, int>, std::vector<State>> first;
  std::map<std::tuple<const FamilyNode*, std::int32_t, int>, std::int32_t> advance;
  std::size_t cost = 0;
};

namespace {

thread_local ScanCache* cache = nullptr;

// Past this many memoized states the scanner falls back to member() on the
// prefix; nested limit ordinals such as w^w reach too many distinct
// Schreier families for the state machine.
constexpr std::size_t kStateBudget = std::size_t{1} << 18;

struct OverBudget {};

void charge(std::size_t n) {
  cache->cost += n;
  if (cache->cost > kStateBudget) throw OverBudget{};
}

struct CacheScope {
  std::lock_guard<std::mutex> lock;
  ScanCache* saved;
  explicit CacheScope(ScanCache& c) : lock(c.mutex), saved(cache) { cache = &c; }
  ~CacheScope() { cache = saved; }
};

void normalize(std::vector<State>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

/// -1 for the empty set.
std::int32_t intern(std::vector<State> set) {
  if (set.empty()) return -1;
  normalize(set);
  charge(set.size());
  auto [it, fresh] = cache->ids.try_emplace(set, static_cast<std::int32_t>(cache->sets.size()));
  if (fresh) cache->sets.push_back(std::move(set));
  return it->second;
}

std::int32_t first_set(const Family& f, int m) {
  std::vector<State> s;
  first_step(f, m, s);
  return intern(std::move(s));
}

std::int32_t advance_set(const Family& f, std::int32_t id, int m) {
  const auto key = std::make_tuple(f.node(), id, m);
  if (auto it = cache->advance.find(key); it != cache->advance.end()) return it->second;
  std::vector<State> next;
  const auto set = cache->sets[static_cast<std::size_t>(id)];  // copy: interning may reallocate
  for (const auto& x : set) step(f, x, m, next);
  const std::int32_t out = intern(std::move(next));
  cache->advance.emplace(key, out);
  return out;
}

void greedy_step(const Family& f, View st, int m, std::vector<State>& out) {
  const Family inner = f.schreier_predecessor().rhs();
  if (st[0] == 0) {
    if (const auto id = first_set(inner, m); id >= 0) out.push_back({1, m, id});
    return;
  }
  if (const auto id = advance_set(inner, st[2], m); id >= 0) {
    out.push_back({st[0], st[1], id});
    return;
  }
  if (st[0] + 1 > st[1]) return;
  if (const auto id = first_set(inner, m); id >= 0) out.push_back({st[0] + 1, st[1], id});
}

State prefixed(std::initializer_list<std::int32_t> head, const State& tail) {
  State s(head);
  s.insert(s.end(), tail.begin(), tail.end());
  return s;
}

/// States of f after reading only m.
void first_step(const Family& f, int m, std::vector<State>& out) {
  const auto key = std::make_pair(f.node(), m);
  auto it = cache->first.find(key);
  if (it == cache->first.end()) {
    std::vector<State> init, res;
    initial(f, init);
    for (const auto& s : init) step(f, s, m, res);
    normalize(res);
    charge(res.size() + 1);
    it = cache->first.emplace(key, std::move(res)).first;
  }
  out.insert(out.end(), it->second.begin(), it->second.end());
}

void initial(const Family& f, std::vector<State>& out) {
  using K = Family::Kind;
  switch (f.kind()) {
    case K::ank:
      out.push_back({0});
      return;
    case K::schreier: {
      const Ordinal& a = f.alpha();
      if (a.is_zero()) {
        out.push_back({0});
      } else if (a == Ordinal::finite(1)) {
        out.push_back({0, 0});
      } else if (a.is_successor()) {
        out.push_back({0, 0, 0});
      } else {
        out.push_back({0});
      }
      return;
    }
    case K::apply: {
      std::vector<State> fs;
      initial(f.lhs(), fs);
      for (const auto& s : fs) out.push_back(prefixed({0, static_cast<std::int32_t>(s.size())}, s));
      return;
    }
    case K::pair_sum: {
      std::vector<State> fs, gs;
      initial(f.lhs(), fs);
      initial(f.rhs(), gs);
      for (const auto& s : fs) out.push_back(prefixed({0}, s));
      for (const auto& s : gs) out.push_back(prefixed({1}, s));
      return;
    }
    case K::power: {
      std::vector<State> fs;
      initial(f.lhs(), fs);
      for (const auto& s : fs) out.push_back(prefixed({1}, s));
      return;
    }
    case K::union_of: {
      std::vector<State> fs, gs;
      initial(f.lhs(), fs);
      initial(f.rhs(), gs);
      for (const auto& s : fs) out.push_back(prefixed({0}, s));
      for (const auto& s : gs) out.push_back(prefixed({1}, s));
      return;
    }
    default:
      throw ConfigError("scanner: family is not norm-grade: " + to_string(f));
  }
}

void step(const Family& f, View st, int m, std::vector<State>& out) {
  using K = Family::Kind;
  switch (f.kind()) {
    case K::ank:
      if (st[0] + 1 <= f.k()) out.push_back({st[0] + 1});
      return;
    case K::schreier: {
      const Ordinal& a = f.alpha();
      if (a.is_zero()) {
        if (st[0] == 0) out.push_back({1});
      } else if (a == Ordinal::finite(1)) {
        const std::int32_t min = st[0] == 0 ? m : st[1];
        if (st[0] + 1 <= min) out.push_back({st[0] + 1, min});
      } else if (a.is_successor()) {
        greedy_step(f, st, m, out);
      } else if (st[0] == 0) {
        // S_a = union of S_{a[n]} over n <= min F.
        for (int n = 1; n <= m; ++n) {
          std::vector<State> sub;
          first_step(f.schreier_branch(static_cast<std::uint64_t>(n)), m, sub);
          for (const auto& s : sub) out.push_back(prefixed({n}, s));
        }
      } else {
        std::vector<State> sub;
        step(f.schreier_branch(static_cast<std::uint64_t>(st[0])), st.subspan(1), m, sub);
        for (const auto& s : sub) out.push_back(prefixed({st[0]}, s));
      }
      return;
    }
    case K::apply: {
      const bool open = st[0] != 0;
      const auto flen = static_cast<std::size_t>(st[1]);
      View fstate = st.subspan(2, flen);
      // m extends the current block
      if (open) {
        std::vector<State> gs;
        step(f.rhs(), st.subspan(2 + flen), m, gs);
        for (const auto& g : gs) {
          State s(st.begin(), st.begin() + static_cast<std::ptrdiff_t>(2 + flen));
          s.insert(s.end(), g.begin(), g.end());
          out.push_back(std::move(s));
        }
      }
      // m opens a new block: it is a minimum seen by the outer family
      std::vector<State> fs;
      step(f.lhs(), fstate, m, fs);
      if (fs.empty()) return;
      std::vector<State> gs;
      first_step(f.rhs(), m, gs);
      for (const auto& fn : fs) {
        for (const auto& g : gs) {
          State s{1, static_cast<std::int32_t>(fn.size())};
          s.insert(s.end(), fn.begin(), fn.end());
          s.insert(s.end(), g.begin(), g.end());
          out.push_back(std::move(s));
        }
      }
      return;
    }
    case K::pair_sum: {
      std::vector<State> sub;
      if (st[0] == 0) {
        step(f.lhs(), st.subspan(1), m, sub);
        for (const auto& s : sub) out.push_back(prefixed({0}, s));
        sub.clear();
        first_step(f.rhs(), m, sub);
      } else {
        step(f.rhs(), st.subspan(1), m, sub);
      }
      for (const auto& s : sub) out.push_back(prefixed({1}, s));
      return;
    }
    case K::power: {
      std::vector<State> sub;
      step(f.lhs(), st.subspan(1), m, sub);
      for (const auto& s : sub) out.push_back(prefixed({st[0]}, s));
      if (st[0] < f.exponent()) {
        sub.clear();
        first_step(f.lhs(), m, sub);
        for (const auto& s : sub) out.push_back(prefixed({st[0] + 1}, s));
      }
      return;
    }
    case K::union_of: {
      std::vector<State> sub;
      step(st[0] == 0 ? f.lhs() : f.rhs(), st.subspan(1), m, sub);
      for (const auto& s : sub) out.push_back(prefixed({st[0]}, s));
      return;
    }
    default:
      throw ConfigError("scanner: family is not norm-grade: " + to_string(f));
  }
}

}  // namespace

AdmissibilityScanner::AdmissibilityScanner(Family f) : family_(std::move(f)), cache_(std::make_shared<ScanCache>()) {
  if (!family_.norm_grade())
    throw ConfigError("scanner needs a norm-grade family (no -, |, @ or explicit): " + to_string(family_));
  CacheScope scope(*cache_);
  initial(family_, states_);
  normalize(states_);
}

bool AdmissibilityScanner::extend_by_member(int m) {
  prefix_.push_back(m);
  if (!member(family_, prefix_)) {
    prefix_.pop_back();
    return false;
  }
  ++length_;
  last_ = m;
  return true;
}

bool AdmissibilityScanner::extend(int m) {
  if (m < 1 || (length_ > 0 && m <= last_))
    throw DomainError("scanner: elements must be positive and strictly increasing");
  if (fallback_) return extend_by_member(m);
  std::vector<State> next;
  try {
    CacheScope scope(*cache_);
    for (const auto& s : states_) step(family_, s, m, next);
  } catch (const OverBudget&) {
    fallback_ = true;
    states_.clear();
    cache_.reset();
    return extend_by_member(m);
  }
  if (next.empty()) return false;
  normalize(next);
  prefix_.push_back(m);
  states_ = std::move(next);
  ++length_;
  last_ = m;
  return true;
}

}  // namespace mts
