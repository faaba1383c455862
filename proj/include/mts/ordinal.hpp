#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mts {

struct OrdinalTerm;

/// Ordinal below epsilon_0 in Cantor normal form
///   w^{e_1}*c_1 + ... + w^{e_k}*c_k,  e_1 > ... > e_k,  c_i >= 1.
/// The empty term list is 0. Every constructor canonicalizes, so equality
/// is structural.
class Ordinal {
 public:
  Ordinal() = default;
  static Ordinal finite(std::uint64_t n);
  static Ordinal omega();
  /// Builds from arbitrary (exponent, coefficient) pairs read left to right
  /// as an ordinal sum; zero coefficients are dropped.
  static Ordinal from_terms(std::vector<OrdinalTerm> terms);

  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  bool is_successor() const;
  bool is_limit() const { return !is_zero() && !is_successor(); }
  /// Value of a finite ordinal; throws std::domain_error otherwise.
  std::uint64_t to_finite() const;
  const std::vector<OrdinalTerm>& terms() const { return terms_; }

  /// Nesting depth of exponents: 0 for finite, 1 for w^k stuff, ...
  int depth() const;

  /// Predecessor of a successor ordinal.
  Ordinal predecessor() const;
  /// Fundamental sequence a[n], n >= 1, for a limit ordinal:
  ///   (g + w^{b+1})[n] = g + w^b * n,   (g + w^l)[n] = g + w^{l[n]}.
  Ordinal fundamental(std::uint64_t n) const;

  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b);

 private:
  std::vector<OrdinalTerm> terms_;
  friend Ordinal add(const Ordinal&, const Ordinal&);
  friend Ordinal mul(const Ordinal&, const Ordinal&);
  friend Ordinal omega_power(const Ordinal&);
};

struct OrdinalTerm {
  Ordinal exponent;
  std::uint64_t coeff = 1;
  friend bool operator==(const OrdinalTerm&, const OrdinalTerm&) = default;
};

enum class Cmp { less, equal, greater };

Cmp compare(const Ordinal& a, const Ordinal& b);
/// Ordinal sum; not commutative (1 + w = w).
Ordinal add(const Ordinal& a, const Ordinal& b);
/// Ordinal product; not commutative (2 * w = w, w * 2 = w*2).
Ordinal mul(const Ordinal& a, const Ordinal& b);
/// w^a as a one-term normal form.
Ordinal omega_power(const Ordinal& a);

struct LeadingData {
  Ordinal ell;
  std::uint64_t coeff;
};
/// Leading exponent l(a) and its coefficient; throws on zero.
LeadingData leading_data(const Ordinal& a);

inline Ordinal operator+(const Ordinal& a, const Ordinal& b) { return add(a, b); }
inline Ordinal operator*(const Ordinal& a, const Ordinal& b) { return mul(a, b); }

/// Text form `w^{<ordinal>}*<int> + ...`; braces are dropped around single
/// token exponents (`w^w*2 + w^3`).
std::string to_string(const Ordinal& a);
/// Parses the text form. Accepts non-canonical input (`1 + w`, `2*3`) and
/// canonicalizes. Throws ParseError.
Ordinal parse_ordinal(std::string_view text);

/// Maximum exponent nesting accepted by the parser.
inline constexpr int kMaxOrdinalDepth = 16;

}  // namespace mts
