#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mts/family.hpp"
#include "mts/rational.hpp"

namespace mts {

/// Finitely supported rational vector over the unit basis (e_k), k >= 1.
/// Entries are kept sorted by index with no stored zeros.
class Vector {
 public:
  using Entry = std::pair<int, Rational>;

  Vector() = default;
  /// Entries in any order; duplicate indices are summed, zeros dropped.
  explicit Vector(std::vector<Entry> entries);
  static Vector unit(int k);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  bool is_zero() const { return entries_.empty(); }
  FiniteSet support() const;
  Rational coeff(int k) const;

  Rational c0_norm() const;
  Rational l1_norm() const;

  /// Ex: coordinatewise product with the indicator of E.
  Vector restricted(const FiniteSet& e) const;
  Vector scaled(const Rational& c) const;
  /// Flips the sign of coordinates whose bit is set in `mask` (bit i is
  /// the i-th support entry).
  Vector sign_flipped(unsigned long long mask) const;

  friend Vector operator+(const Vector& a, const Vector& b);
  friend bool operator==(const Vector& a, const Vector& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<Entry> entries_;
};

/// `k:num/den` pairs separated by whitespace, e.g. `2:1 3:1 5:3/2`.
Vector parse_vector(std::string_view text);
std::string to_string(const Vector& x);

}  // namespace mts
