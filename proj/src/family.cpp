#include "mts/family.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <map>
#include <mutex>
#include <set>

#include "mts/errors.hpp"
#include "mts/scanner.hpp"

namespace mts {

// ---------------------------------------------------------------------------
// Finite sets

void validate_set(const FiniteSet& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 1) throw DomainError("set element below 1 in " + to_string(s));
    if (i > 0 && s[i] <= s[i - 1]) throw DomainError("set not strictly increasing: " + to_string(s));
  }
}

std::string to_string(const FiniteSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out + "}";
}

namespace {

std::vector<int> parse_int_list(std::string_view text, const char* what) {
  std::vector<int> out;
  std::string cur;
  auto flush = [&](std::size_t col) {
    if (cur.empty()) throw ParseError(std::string(what) + ": empty entry", 1, static_cast<int>(col));
    try {
      std::size_t used = 0;
      long v = std::stol(cur, &used);
      if (used != cur.size() || v > INT_MAX || v < INT_MIN) throw std::invalid_argument("");
      out.push_back(static_cast<int>(v));
    } catch (const std::exception&) {
      throw ParseError(std::string(what) + ": bad integer '" + cur + "'", 1, static_cast<int>(col));
    }
    cur.clear();
  };
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    any = true;
    if (c == ',') {
      flush(i + 1);
    } else {
      cur += c;
    }
  }
  if (any) flush(text.size());
  return out;
}

}  // namespace

FiniteSet parse_set(std::string_view text) {
  std::string s(text);
  auto b = s.find_first_not_of(" \t\n");
  auto e = s.find_last_not_of(" \t\n");
  if (b == std::string::npos) return {};
  s = s.substr(b, e - b + 1);
  if (!s.empty() && s.front() == '{') {
    if (s.back() != '}') throw ParseError("set: missing '}'");
    s = s.substr(1, s.size() - 2);
  }
  FiniteSet out = parse_int_list(s, "set");
  try {
    validate_set(out);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Index sequences

IndexSequence IndexSequence::arithmetic(int first, int step) {
  if (first < 1 || step < 1) throw ConfigError("arithmetic sequence needs first >= 1 and step >= 1");
  IndexSequence m;
  m.kind_ = Kind::arithmetic;
  m.first_ = first;
  m.step_ = step;
  return m;
}

IndexSequence IndexSequence::list(std::vector<int> values) {
  if (values.empty()) throw ConfigError("empty index list");
  try {
    validate_set(values);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("index list: ") + e.what());
  }
  IndexSequence m;
  m.kind_ = Kind::list;
  m.values_ = std::move(values);
  return m;
}

IndexSequence IndexSequence::powers(int base) {
  if (base < 2) throw ConfigError("power sequence needs base >= 2");
  IndexSequence m;
  m.kind_ = Kind::powers;
  m.first_ = base;
  return m;
}

std::optional<long long> IndexSequence::at(int k) const {
  if (k < 1) return std::nullopt;
  switch (kind_) {
    case Kind::arithmetic:
      return static_cast<long long>(first_) + static_cast<long long>(step_) * (k - 1);
    case Kind::list:
      if (static_cast<std::size_t>(k) > values_.size()) return std::nullopt;
      return values_[k - 1];
    case Kind::powers: {
      long long v = 1;
      for (int i = 0; i < k; ++i) {
        if (v > LLONG_MAX / first_) return std::nullopt;
        v *= first_;
      }
      return v;
    }
  }
  return std::nullopt;
}

std::optional<bool> IndexSequence::contains(long long v) const {
  switch (kind_) {
    case Kind::arithmetic:
      return v >= first_ && (v - first_) % step_ == 0;
    case Kind::list:
      if (v > values_.back()) return std::nullopt;
      return std::binary_search(values_.begin(), values_.end(), static_cast<int>(v));
    case Kind::powers: {
      if (v < first_) return false;
      while (v % first_ == 0) v /= first_;
      return v == 1;
    }
  }
  return std::nullopt;
}

std::string to_string(const IndexSequence& m) {
  switch (m.kind_) {
    case IndexSequence::Kind::arithmetic:
      return "ap(" + std::to_string(m.first_) + "," + std::to_string(m.step_) + ")";
    case IndexSequence::Kind::powers:
      return "pow(" + std::to_string(m.first_) + ")";
    case IndexSequence::Kind::list: {
      std::string out = "[";
      for (std::size_t i = 0; i < m.values_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(m.values_[i]);
      }
      return out + "]";
    }
  }
  return {};
}

IndexSequence parse_index_sequence(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto args = [&](std::size_t open) {
    if (s.back() != ')') throw ParseError("index sequence: missing ')' in '" + s + "'");
    return parse_int_list(std::string_view(s).substr(open + 1, s.size() - open - 2), "index sequence");
  };
  try {
    if (s.rfind("ap(", 0) == 0) {
      auto v = args(2);
      if (v.size() != 2) throw ParseError("ap(first,step) takes two integers");
      return IndexSequence::arithmetic(v[0], v[1]);
    }
    if (s.rfind("pow(", 0) == 0) {
      auto v = args(3);
      if (v.size() != 1) throw ParseError("pow(base) takes one integer");
      return IndexSequence::powers(v[0]);
    }
    if (!s.empty() && s.front() == '[' && s.back() == ']') {
      return IndexSequence::list(parse_int_list(std::string_view(s).substr(1, s.size() - 2), "index list"));
    }
  } catch (const ConfigError& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown index sequence '" + s + "' (expected ap(a,d), pow(b) or [list])");
}

// ---------------------------------------------------------------------------
// Family nodes

struct FamilyNode {
  Family::Kind kind{};
  int k = 0;
  Ordinal alpha;
  std::optional<Family> lhs;
  std::optional<Family> rhs;
  std::optional<IndexSequence> seq;
  std::vector<FiniteSet> sets;      // explicit: hereditary closure, sorted
  std::vector<FiniteSet> generators;  // explicit: maximal sets, sorted
  bool norm_grade = false;

  mutable std::mutex mu;
  mutable std::optional<Family> predecessor;
  mutable std::map<std::uint64_t, Family> branches;
  // minus: members of rhs below a bound that pass the maximality probe,
  // keyed by (bound, probe_bound).
  mutable std::map<std::pair<int, int>, std::vector<FiniteSet>> maximal_below;
};

namespace {

std::shared_ptr<FamilyNode> make_node(Family::Kind kind) {
  auto n = std::make_shared<FamilyNode>();
  n->kind = kind;
  return n;
}

}  // namespace

Family Family::singletons() { return schreier(Ordinal{}); }

Family Family::ank(int k) {
  if (k < 1) throw ConfigError("A[k] needs k >= 1");
  auto n = make_node(Kind::ank);
  n->k = k;
  n->norm_grade = true;
  return Family(n);
}

// Schreier nodes are shared per ordinal so that the per-node caches (and
// the scanner memo keyed by node) are reused across fundamental sequences.
Family Family::schreier(Ordinal alpha) {
  static std::mutex mu;
  static std::map<Ordinal, std::weak_ptr<const FamilyNode>> pool;
  std::lock_guard lock(mu);
  auto& slot = pool[alpha];
  if (auto live = slot.lock()) return Family(std::move(live));
  auto n = make_node(Kind::schreier);
  n->alpha = std::move(alpha);
  n->norm_grade = true;
  slot = n;
  return Family(n);
}

Family Family::apply(Family f, Family g) {
  auto n = make_node(Kind::apply);
  n->norm_grade = f.norm_grade() && g.norm_grade();
  n->lhs = std::move(f);
  n->rhs = std::move(g);
  return Family(n);
}

Family Family::pair_sum(Family f, Family g) {
  auto n = make_node(Kind::pair_sum);
  n->norm_grade = f.norm_grade() && g.norm_grade();
  n->lhs = std::move(f);
  n->rhs = std::move(g);
  return Family(n);
}

Family Family::power(Family f, int exponent) {
  if (exponent < 1) throw ConfigError("F^n needs n >= 1");
  auto n = make_node(Kind::power);
  n->norm_grade = f.norm_grade();
  n->k = exponent;
  n->lhs = std::move(f);
  return Family(n);
}

Family Family::union_of(Family f, Family g) {
  auto n = make_node(Kind::union_of);
  n->norm_grade = f.norm_grade() && g.norm_grade();
  n->lhs = std::move(f);
  n->rhs = std::move(g);
  return Family(n);
}

Family Family::minus(Family f, Family g) {
  auto n = make_node(Kind::minus);
  n->lhs = std::move(f);
  n->rhs = std::move(g);
  return Family(n);
}

Family Family::restrict(Family f, IndexSequence m) {
  auto n = make_node(Kind::restrict);
  n->lhs = std::move(f);
  n->seq = std::move(m);
  return Family(n);
}

Family Family::renumber(Family f, IndexSequence m) {
  auto n = make_node(Kind::renumber);
  n->lhs = std::move(f);
  n->seq = std::move(m);
  return Family(n);
}

Family Family::explicit_sets(const std::vector<FiniteSet>& sets) {
  std::set<FiniteSet> closure{FiniteSet{}};
  for (const auto& s : sets) {
    validate_set(s);
    if (s.size() > 20) throw ConfigError("explicit family set too large to close: " + to_string(s));
    const std::size_t count = std::size_t{1} << s.size();
    for (std::size_t mask = 0; mask < count; ++mask) {
      FiniteSet sub;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (mask >> i & 1) sub.push_back(s[i]);
      closure.insert(std::move(sub));
    }
  }
  auto n = make_node(Kind::explicit_sets);
  n->sets.assign(closure.begin(), closure.end());
  for (const auto& s : n->sets) {
    bool covered = false;
    for (const auto& t : n->sets) {
      if (t.size() > s.size() && std::includes(t.begin(), t.end(), s.begin(), s.end())) {
        covered = true;
        break;
      }
    }
    if (!covered && !s.empty()) n->generators.push_back(s);
  }
  return Family(n);
}

Family::Kind Family::kind() const { return node_->kind; }
int Family::k() const { return node_->k; }
const Ordinal& Family::alpha() const { return node_->alpha; }
const Family& Family::lhs() const { return *node_->lhs; }
const Family& Family::rhs() const { return *node_->rhs; }
int Family::exponent() const { return node_->k; }
const IndexSequence& Family::sequence() const { return *node_->seq; }
const std::vector<FiniteSet>& Family::sets() const { return node_->sets; }
bool Family::norm_grade() const { return node_->norm_grade; }

Family Family::schreier_predecessor() const {
  std::lock_guard lock(node_->mu);
  if (!node_->predecessor) {
    node_->predecessor = apply(schreier(Ordinal::finite(1)), schreier(node_->alpha.predecessor()));
  }
  return *node_->predecessor;
}

Family Family::schreier_branch(std::uint64_t n) const {
  std::lock_guard lock(node_->mu);
  auto it = node_->branches.find(n);
  if (it == node_->branches.end()) {
    it = node_->branches.emplace(n, schreier(node_->alpha.fundamental(n))).first;
  }
  return it->second;
}

bool operator==(const Family& a, const Family& b) {
  if (a.node_ == b.node_) return true;
  const FamilyNode& x = *a.node_;
  const FamilyNode& y = *b.node_;
  if (x.kind != y.kind || x.k != y.k || !(x.alpha == y.alpha) || x.sets != y.sets) return false;
  if (x.seq.has_value() != y.seq.has_value() || (x.seq && !(*x.seq == *y.seq))) return false;
  if (x.lhs.has_value() != y.lhs.has_value() || (x.lhs && !(*x.lhs == *y.lhs))) return false;
  if (x.rhs.has_value() != y.rhs.has_value() || (x.rhs && !(*x.rhs == *y.rhs))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Printing and parsing

namespace {

void print_family(const Family& f, bool operand, std::string& out) {
  using K = Family::Kind;
  switch (f.kind()) {
    case K::ank:
      out += "A[" + std::to_string(f.k()) + "]";
      return;
    case K::schreier:
      out += "S[" + to_string(f.alpha()) + "]";
      return;
    case K::union_of:
      out += "union(";
      print_family(f.lhs(), false, out);
      out += ',';
      print_family(f.rhs(), false, out);
      out += ')';
      return;
    case K::pair_sum:
      out += '(';
      print_family(f.lhs(), false, out);
      out += ',';
      print_family(f.rhs(), false, out);
      out += ')';
      return;
    case K::explicit_sets: {
      out += "explicit(";
      const auto& gens = f.node()->generators;
      for (std::size_t i = 0; i < gens.size(); ++i) {
        if (i) out += ',';
        out += to_string(gens[i]);
      }
      out += ')';
      return;
    }
    case K::apply:
      print_family(f.lhs(), true, out);
      out += ".apply(";
      print_family(f.rhs(), false, out);
      out += ')';
      return;
    case K::power:
      print_family(f.lhs(), true, out);
      out += "^" + std::to_string(f.exponent());
      return;
    case K::restrict:
      print_family(f.lhs(), true, out);
      out += "|" + to_string(f.sequence());
      return;
    case K::renumber:
      print_family(f.lhs(), true, out);
      out += "@" + to_string(f.sequence());
      return;
    case K::minus:
      if (operand) out += '(';
      print_family(f.lhs(), false, out);
      out += '-';
      print_family(f.rhs(), true, out);
      if (operand) out += ')';
      return;
  }
}

class FamilyParser {
 public:
  explicit FamilyParser(std::string_view s) : s_(s) {}

  Family parse_all() {
    Family f = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  Family expr() {
    Family f = postfix();
    for (;;) {
      skip_ws();
      if (peek() != '-') return f;
      ++pos_;
      f = Family::minus(f, postfix());
    }
  }

  Family postfix() {
    Family f = primary();
    for (;;) {
      skip_ws();
      if (match(".apply(")) {
        Family g = expr();
        expect(')');
        f = Family::apply(f, g);
      } else if (peek() == '^') {
        ++pos_;
        f = Family::power(f, integer());
      } else if (peek() == '|') {
        ++pos_;
        f = Family::restrict(f, sequence());
      } else if (peek() == '@') {
        ++pos_;
        f = Family::renumber(f, sequence());
      } else {
        return f;
      }
    }
  }

  Family primary() {
    skip_ws();
    if (match("S[")) {
      auto close = s_.find(']', pos_);
      if (close == std::string_view::npos) fail("missing ']'");
      Ordinal a;
      try {
        a = parse_ordinal(s_.substr(pos_, close - pos_));
      } catch (const ParseError& e) {
        fail(e.what());
      }
      pos_ = close + 1;
      return Family::schreier(std::move(a));
    }
    if (match("A[")) {
      int k = integer();
      expect(']');
      return Family::ank(k);
    }
    if (match("union(")) {
      Family a = expr();
      expect(',');
      Family b = expr();
      expect(')');
      return Family::union_of(a, b);
    }
    if (match("explicit(")) {
      std::vector<FiniteSet> sets;
      skip_ws();
      while (peek() == '{') {
        auto close = s_.find('}', pos_);
        if (close == std::string_view::npos) fail("missing '}'");
        try {
          sets.push_back(parse_set(s_.substr(pos_, close - pos_ + 1)));
        } catch (const ParseError& e) {
          fail(e.what());
        }
        pos_ = close + 1;
        skip_ws();
        if (peek() == ',') ++pos_;
        skip_ws();
      }
      expect(')');
      return Family::explicit_sets(sets);
    }
    if (peek() == '(') {
      ++pos_;
      Family a = expr();
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        Family b = expr();
        expect(')');
        return Family::pair_sum(a, b);
      }
      expect(')');
      return a;
    }
    fail("expected a family");
  }

  IndexSequence sequence() {
    skip_ws();
    std::size_t start = pos_;
    char close = 0;
    if (peek() == '[') {
      close = ']';
    } else if (match("ap(") || match("pow(")) {
      close = ')';
    } else {
      fail("expected an index sequence");
    }
    auto end = s_.find(close, pos_);
    if (end == std::string_view::npos) fail("unterminated index sequence");
    pos_ = end + 1;
    try {
      return parse_index_sequence(s_.substr(start, pos_ - start));
    } catch (const ParseError& e) {
      fail(e.what());
    }
  }

  int integer() {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer");
    long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (s_[pos_++] - '0');
      if (v > INT_MAX) fail("integer too large");
    }
    return static_cast<int>(v);
  }

  bool match(std::string_view tok) {
    skip_ws();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("family: " + msg, 1, static_cast<int>(pos_) + 1);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const Family& f) {
  std::string out;
  print_family(f, false, out);
  return out;
}

Family parse_family(std::string_view text) {
  try {
    return FamilyParser(text).parse_all();
  } catch (const ConfigError& e) {
    throw ParseError(std::string("family: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Membership

namespace {

FiniteSet slice(const FiniteSet& s, std::size_t b, std::size_t e) {
  return FiniteSet(s.begin() + static_cast<std::ptrdiff_t>(b), s.begin() + static_cast<std::ptrdiff_t>(e));
}

/// Fewest consecutive pieces of s that each lie in the hereditary family f.
/// Taking the longest admissible prefix each time is optimal because every
/// suffix of a remainder is covered by restricting the pieces of the
/// remainder.
std::size_t greedy_pieces(const Family& f, const FiniteSet& s, const MemberOptions& opts) {
  std::size_t pieces = 0, i = 0;
  while (i < s.size()) {
    std::size_t e = i + 1;
    if (!member(f, slice(s, i, e), opts)) return SIZE_MAX;
    while (e < s.size() && member(f, slice(s, i, e + 1), opts)) ++e;
    ++pieces;
    i = e;
  }
  return pieces;
}

bool member_apply(const Family& outer, const Family& inner, const FiniteSet& s,
                  const MemberOptions& opts) {
  const std::size_t n = s.size();
  // max_end[i]: the pieces starting at i that lie in `inner` are exactly
  // s[i..e) for i < e <= max_end[i] (heredity).
  std::vector<std::size_t> max_end(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t e = i;
    while (e < n && member(inner, slice(s, i, e + 1), opts)) ++e;
    max_end[i] = e;
  }
  std::map<FiniteSet, bool> outer_memo;
  auto outer_ok = [&](const FiniteSet& minima) {
    auto it = outer_memo.find(minima);
    if (it != outer_memo.end()) return it->second;
    bool v = member(outer, minima, opts);
    outer_memo.emplace(minima, v);
    return v;
  };
  std::set<std::pair<std::size_t, FiniteSet>> dead;
  FiniteSet minima;
  auto dfs = [&](auto&& self, std::size_t pos) -> bool {
    if (pos == n) return true;
    if (dead.count({pos, minima})) return false;
    minima.push_back(s[pos]);
    if (outer_ok(minima)) {
      for (std::size_t e = max_end[pos]; e > pos; --e) {
        if (self(self, e)) return true;
      }
    }
    minima.pop_back();
    dead.insert({pos, minima});
    return false;
  };
  return dfs(dfs, 0);
}

const std::vector<FiniteSet>& maximal_members_below(const Family& minus_node, int bound,
                                                    const MemberOptions& opts) {
  const FamilyNode& node = *minus_node.node();
  const auto key = std::make_pair(bound, opts.probe_bound);
  {
    std::lock_guard lock(node.mu);
    auto it = node.maximal_below.find(key);
    if (it != node.maximal_below.end()) return it->second;
  }
  std::vector<FiniteSet> found;
  const Family& g = minus_node.rhs();
  auto candidates = bound >= 1 ? enumerate_members(g, bound, opts) : std::vector<FiniteSet>{FiniteSet{}};
  for (auto& cand : candidates) {
    if (is_maximal(g, cand, opts.probe_bound, opts)) found.push_back(std::move(cand));
  }
  std::lock_guard lock(node.mu);
  return node.maximal_below.emplace(key, std::move(found)).first->second;
}

}  // namespace

bool member(const Family& f, const FiniteSet& s, const MemberOptions& opts) {
  if (s.empty()) return true;
  using K = Family::Kind;
  switch (f.kind()) {
    case K::ank:
      return s.size() <= static_cast<std::size_t>(f.k());
    case K::schreier: {
      const Ordinal& a = f.alpha();
      if (a.is_zero()) return s.size() <= 1;
      if (a == Ordinal::finite(1)) return s.size() <= static_cast<std::size_t>(s.front());
      if (a.is_successor()) {
        // S_{b+1} = S_1[S_b]: the piece minima form an S_1 set iff the
        // number of pieces is at most min s.
        const Family inner = f.schreier_predecessor().rhs();
        return greedy_pieces(inner, s, opts) <= static_cast<std::size_t>(s.front());
      }
      for (int n = 1; n <= s.front(); ++n) {
        if (member(f.schreier_branch(static_cast<std::uint64_t>(n)), s, opts)) return true;
      }
      return false;
    }
    case K::apply:
      return member_apply(f.lhs(), f.rhs(), s, opts);
    case K::pair_sum:
      for (std::size_t split = 0; split <= s.size(); ++split) {
        if (member(f.lhs(), slice(s, 0, split), opts) && member(f.rhs(), slice(s, split, s.size()), opts))
          return true;
      }
      return false;
    case K::power:
      return greedy_pieces(f.lhs(), s, opts) <= static_cast<std::size_t>(f.exponent());
    case K::union_of:
      return member(f.lhs(), s, opts) || member(f.rhs(), s, opts);
    case K::minus: {
      for (const auto& g : maximal_members_below(f, s.front() - 1, opts)) {
        FiniteSet joined = g;
        joined.insert(joined.end(), s.begin(), s.end());
        if (member(f.lhs(), joined, opts)) return true;
      }
      return false;
    }
    case K::restrict:
      for (int v : s) {
        auto in = f.sequence().contains(v);
        if (!in) throw ConfigError("restriction rule " + to_string(f.sequence()) + " cannot decide " + std::to_string(v));
        if (!*in) return false;
      }
      return member(f.lhs(), s, opts);
    case K::renumber: {
      FiniteSet mapped;
      mapped.reserve(s.size());
      for (int k : s) {
        auto p = f.sequence().at(k);
        if (!p) throw ConfigError("renumbering rule " + to_string(f.sequence()) + " has no term " + std::to_string(k));
        if (*p > INT_MAX) throw ConfigError("renumbered index too large");
        mapped.push_back(static_cast<int>(*p));
      }
      return member(f.lhs(), mapped, opts);
    }
    case K::explicit_sets:
      return std::binary_search(f.sets().begin(), f.sets().end(), s);
  }
  return false;
}

std::vector<FiniteSet> enumerate_members(const Family& f, int n, const MemberOptions& opts) {
  if (n < 1) throw DomainError("enumerate_members: universe size must be positive");
  std::vector<FiniteSet> out;
  FiniteSet cur;
  if (f.norm_grade()) {
    auto dfs = [&](auto&& self, const AdmissibilityScanner& sc) -> void {
      out.push_back(cur);
      for (int m = (cur.empty() ? 1 : cur.back() + 1); m <= n; ++m) {
        AdmissibilityScanner next = sc;
        if (!next.extend(m)) continue;
        cur.push_back(m);
        self(self, next);
        cur.pop_back();
      }
    };
    dfs(dfs, AdmissibilityScanner(f));
  } else {
    auto dfs = [&](auto&& self) -> void {
      out.push_back(cur);
      for (int m = (cur.empty() ? 1 : cur.back() + 1); m <= n; ++m) {
        cur.push_back(m);
        if (member(f, cur, opts)) self(self);
        cur.pop_back();
      }
    };
    dfs(dfs);
  }
  return out;
}

bool is_maximal(const Family& f, const FiniteSet& s, int probe_bound, const MemberOptions& opts) {
  validate_set(s);
  if (!member(f, s, opts)) throw DomainError("is_maximal: " + to_string(s) + " is not a member");
  const int top = (s.empty() ? 0 : s.back()) + probe_bound;
  // Heredity: a proper superset in f yields a one-element extension in f.
  // Gaps below max(s) are probed too since f need not be spreading.
  for (int m = 1; m <= top; ++m) {
    if (std::binary_search(s.begin(), s.end(), m)) continue;
    FiniteSet ext = s;
    ext.insert(std::upper_bound(ext.begin(), ext.end(), m), m);
    if (member(f, ext, opts)) return false;
  }
  return true;
}

bool is_admissible(const Family& f, const std::vector<FiniteSet>& sets, const MemberOptions& opts) {
  FiniteSet minima;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    validate_set(sets[i]);
    if (sets[i].empty()) throw DomainError("is_admissible: empty set in sequence");
    if (i > 0 && sets[i - 1].back() >= sets[i].front())
      throw DomainError("is_admissible: sets not ordered: " + to_string(sets[i - 1]) + " vs " + to_string(sets[i]));
    minima.push_back(sets[i].front());
  }
  return member(f, minima, opts);
}

SubsetResult subset_check_serial(const Family& f, const Family& g, int n, const MemberOptions& opts) {
  for (const auto& s : enumerate_members(f, n, opts)) {
    if (!member(g, s, opts)) return {false, s};
  }
  return {};
}

SubsetResult subset_check(const Family& f, const Family& g, int n, const MemberOptions& opts) {
  const auto candidates = enumerate_members(f, n, opts);
  const auto count = static_cast<std::ptrdiff_t>(candidates.size());
  std::vector<char> fails(candidates.size(), 0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    fails[static_cast<std::size_t>(i)] = member(g, candidates[static_cast<std::size_t>(i)], opts) ? 0 : 1;
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (fails[i]) return {false, candidates[i]};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Index bounds

IndexBound index_bound(const Family& f) {
  using K = Family::Kind;
  switch (f.kind()) {
    case K::ank:
      return {Ordinal::finite(static_cast<std::uint64_t>(f.k())), true};
    case K::schreier:
      return {omega_power(f.alpha()), true};
    case K::apply: {
      auto outer = index_bound(f.lhs());
      auto inner = index_bound(f.rhs());
      return {mul(inner.value, outer.value), false};
    }
    case K::power: {
      auto base = index_bound(f.lhs());
      bool exact = base.exact && (f.lhs().kind() == K::ank || f.lhs().kind() == K::schreier);
      return {mul(base.value, Ordinal::finite(static_cast<std::uint64_t>(f.exponent()))), exact};
    }
    case K::union_of: {
      auto a = index_bound(f.lhs());
      auto b = index_bound(f.rhs());
      return {std::max(a.value, b.value), false};
    }
    case K::pair_sum: {
      auto a = index_bound(f.lhs());
      auto b = index_bound(f.rhs());
      return {add(b.value, a.value), false};
    }
    case K::minus:
    case K::restrict:
    case K::renumber:
    case K::explicit_sets:
      break;
  }
  throw ConfigError("index_bound: unsupported constructor in " + to_string(f));
}

}  // namespace mts
