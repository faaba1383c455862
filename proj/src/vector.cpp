#include "mts/vector.hpp"

#include <algorithm>
#include <sstream>

#include "mts/errors.hpp"

namespace mts {

Vector::Vector(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (auto& [k, a] : entries) {
    if (k < 1) throw DomainError("vector index below 1: " + std::to_string(k));
    if (!entries_.empty() && entries_.back().first == k) {
      entries_.back().second += a;
      if (entries_.back().second == 0) entries_.pop_back();
    } else if (a != 0) {
      entries_.emplace_back(k, std::move(a));
    }
  }
}

Vector Vector::unit(int k) { return Vector({{k, Rational(1)}}); }

FiniteSet Vector::support() const {
  FiniteSet s;
  s.reserve(entries_.size());
  for (const auto& e : entries_) s.push_back(e.first);
  return s;
}

Rational Vector::coeff(int k) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                             [](const Entry& e, int key) { return e.first < key; });
  return (it != entries_.end() && it->first == k) ? it->second : Rational(0);
}

Rational Vector::c0_norm() const {
  Rational m = 0;
  for (const auto& e : entries_) m = std::max(m, Rational(abs(e.second)));
  return m;
}

Rational Vector::l1_norm() const {
  Rational s = 0;
  for (const auto& e : entries_) s += abs(e.second);
  return s;
}

Vector Vector::restricted(const FiniteSet& e) const {
  Vector r;
  for (const auto& entry : entries_) {
    if (std::binary_search(e.begin(), e.end(), entry.first)) r.entries_.push_back(entry);
  }
  return r;
}

Vector Vector::scaled(const Rational& c) const {
  if (c == 0) return {};
  Vector r = *this;
  for (auto& e : r.entries_) e.second *= c;
  return r;
}

Vector Vector::sign_flipped(unsigned long long mask) const {
  Vector r = *this;
  for (std::size_t i = 0; i < r.entries_.size() && i < 64; ++i) {
    if (mask >> i & 1ULL) r.entries_[i].second = -r.entries_[i].second;
  }
  return r;
}

Vector operator+(const Vector& a, const Vector& b) {
  std::vector<Vector::Entry> all = a.entries_;
  all.insert(all.end(), b.entries_.begin(), b.entries_.end());
  return Vector(std::move(all));
}

Vector parse_vector(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<Vector::Entry> entries;
  std::vector<int> seen;
  for (std::string tok; in >> tok;) {
    auto colon = tok.find(':');
    if (colon == std::string::npos) throw ParseError("vector: expected 'k:value', got '" + tok + "'");
    int k = 0;
    try {
      std::size_t used = 0;
      k = std::stoi(tok.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ParseError("vector: bad index in '" + tok + "'");
    }
    if (k < 1) throw ParseError("vector: index below 1 in '" + tok + "'");
    if (std::find(seen.begin(), seen.end(), k) != seen.end())
      throw ParseError("vector: duplicate index " + std::to_string(k));
    seen.push_back(k);
    entries.emplace_back(k, parse_rational(tok.substr(colon + 1)));
  }
  return Vector(std::move(entries));
}

std::string to_string(const Vector& x) {
  std::string out;
  for (const auto& [k, a] : x.entries()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(k) + ":" + to_string(a);
  }
  return out;
}

}  // namespace mts
