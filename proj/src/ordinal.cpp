#include "mts/ordinal.hpp"

#include <cctype>
#include <limits>
#include <stdexcept>

#include "mts/errors.hpp"

namespace mts {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b)
    throw std::overflow_error("ordinal coefficient overflow");
  return a + b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    throw std::overflow_error("ordinal coefficient overflow");
  return a * b;
}

}  // namespace

Ordinal Ordinal::finite(std::uint64_t n) {
  Ordinal r;
  if (n > 0) r.terms_.push_back({Ordinal{}, n});
  return r;
}

Ordinal Ordinal::omega() { return omega_power(finite(1)); }

Ordinal Ordinal::from_terms(std::vector<OrdinalTerm> terms) {
  Ordinal acc;
  for (auto& t : terms) {
    if (t.coeff == 0) continue;
    Ordinal single;
    single.terms_.push_back(std::move(t));
    acc = add(acc, single);
  }
  return acc;
}

bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

bool Ordinal::is_successor() const {
  return !terms_.empty() && terms_.back().exponent.is_zero();
}

std::uint64_t Ordinal::to_finite() const {
  if (!is_finite()) throw std::domain_error("ordinal is not finite: " + to_string(*this));
  return terms_.empty() ? 0 : terms_[0].coeff;
}

int Ordinal::depth() const {
  int d = 0;
  for (const auto& t : terms_) {
    if (!t.exponent.is_zero()) d = std::max(d, 1 + t.exponent.depth());
  }
  return d;
}

Ordinal Ordinal::predecessor() const {
  if (!is_successor()) throw std::domain_error("not a successor ordinal: " + to_string(*this));
  Ordinal r = *this;
  if (--r.terms_.back().coeff == 0) r.terms_.pop_back();
  return r;
}

Ordinal Ordinal::fundamental(std::uint64_t n) const {
  if (!is_limit()) throw std::domain_error("not a limit ordinal: " + to_string(*this));
  if (n == 0) throw std::domain_error("fundamental sequence index starts at 1");
  Ordinal prefix = *this;
  Ordinal last_exp = prefix.terms_.back().exponent;
  if (--prefix.terms_.back().coeff == 0) prefix.terms_.pop_back();
  Ordinal tail;
  if (last_exp.is_successor()) {
    tail.terms_.push_back({last_exp.predecessor(), n});
  } else {
    tail = omega_power(last_exp.fundamental(n));
  }
  return add(prefix, tail);
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const auto n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.terms_[i].exponent <=> b.terms_[i].exponent; c != 0) return c;
    if (auto c = a.terms_[i].coeff <=> b.terms_[i].coeff; c != 0) return c;
  }
  return a.terms_.size() <=> b.terms_.size();
}

bool operator==(const Ordinal& a, const Ordinal& b) { return a.terms_ == b.terms_; }

Cmp compare(const Ordinal& a, const Ordinal& b) {
  auto c = a <=> b;
  if (c < 0) return Cmp::less;
  if (c > 0) return Cmp::greater;
  return Cmp::equal;
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  const Ordinal& lead = b.terms_.front().exponent;
  Ordinal r;
  for (const auto& t : a.terms_) {
    auto c = t.exponent <=> lead;
    if (c > 0) {
      r.terms_.push_back(t);
    } else {
      if (c == 0) {
        r.terms_.push_back({lead, checked_add(t.coeff, b.terms_.front().coeff)});
        r.terms_.insert(r.terms_.end(), b.terms_.begin() + 1, b.terms_.end());
        return r;
      }
      break;
    }
  }
  r.terms_.insert(r.terms_.end(), b.terms_.begin(), b.terms_.end());
  return r;
}

Ordinal mul(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const Ordinal& a_lead = a.terms_.front().exponent;
  Ordinal r;
  // Left distributivity: a * (sum of w^e c) = sum of a * w^e c.
  for (const auto& t : b.terms_) {
    Ordinal piece;
    if (t.exponent.is_zero()) {
      piece = a;
      piece.terms_.front().coeff = checked_mul(piece.terms_.front().coeff, t.coeff);
    } else {
      piece.terms_.push_back({add(a_lead, t.exponent), t.coeff});
    }
    r = add(r, piece);
  }
  return r;
}

Ordinal omega_power(const Ordinal& a) {
  Ordinal r;
  r.terms_.push_back({a, 1});
  return r;
}

LeadingData leading_data(const Ordinal& a) {
  if (a.is_zero()) throw std::domain_error("leading_data of zero ordinal");
  return {a.terms().front().exponent, a.terms().front().coeff};
}

namespace {

bool is_single_token(const Ordinal& e) {
  return e.is_finite() || e == Ordinal::omega();
}

void print(const Ordinal& a, std::string& out) {
  if (a.is_zero()) {
    out += '0';
    return;
  }
  bool first = true;
  for (const auto& t : a.terms()) {
    if (!first) out += " + ";
    first = false;
    if (t.exponent.is_zero()) {
      out += std::to_string(t.coeff);
      continue;
    }
    out += 'w';
    if (t.exponent != Ordinal::finite(1)) {
      out += '^';
      if (is_single_token(t.exponent)) {
        print(t.exponent, out);
      } else {
        out += '{';
        print(t.exponent, out);
        out += '}';
      }
    }
    if (t.coeff != 1) {
      out += '*';
      out += std::to_string(t.coeff);
    }
  }
}

class OrdinalParser {
 public:
  explicit OrdinalParser(std::string_view s) : s_(s) {}

  Ordinal parse_all() {
    Ordinal r = sum(0);
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character");
    return r;
  }

 private:
  Ordinal sum(int depth) {
    if (depth > kMaxOrdinalDepth) fail("ordinal nesting too deep");
    Ordinal acc = term(depth);
    for (;;) {
      skip_ws();
      if (peek() != '+') break;
      ++pos_;
      acc = add(acc, term(depth));
    }
    return acc;
  }

  Ordinal term(int depth) {
    skip_ws();
    Ordinal base;
    if (peek() == 'w') {
      ++pos_;
      Ordinal exponent = Ordinal::finite(1);
      skip_ws();
      if (peek() == '^') {
        ++pos_;
        skip_ws();
        if (peek() == '{') {
          ++pos_;
          exponent = sum(depth + 1);
          skip_ws();
          if (peek() != '}') fail("expected '}'");
          ++pos_;
        } else if (peek() == 'w') {
          ++pos_;
          exponent = Ordinal::omega();
        } else {
          exponent = Ordinal::finite(integer());
        }
      }
      if (exponent.depth() + 1 > kMaxOrdinalDepth) fail("ordinal nesting too deep");
      base = omega_power(exponent);
    } else if (std::isdigit(static_cast<unsigned char>(peek()))) {
      base = Ordinal::finite(integer());
    } else {
      fail("expected 'w' or an integer");
    }
    skip_ws();
    while (peek() == '*') {
      ++pos_;
      skip_ws();
      base = mul(base, Ordinal::finite(integer()));
      skip_ws();
    }
    return base;
  }

  std::uint64_t integer() {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer");
    std::uint64_t v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = checked_add(checked_mul(v, 10), static_cast<std::uint64_t>(s_[pos_] - '0'));
      ++pos_;
    }
    return v;
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("ordinal: " + msg + " in '" + std::string(s_) + "'", 1,
                     static_cast<int>(pos_) + 1);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const Ordinal& a) {
  std::string out;
  print(a, out);
  return out;
}

Ordinal parse_ordinal(std::string_view text) {
  try {
    return OrdinalParser(text).parse_all();
  } catch (const std::overflow_error& e) {
    throw ParseError(std::string("ordinal: ") + e.what(), 1, 0);
  }
}

}  // namespace mts
