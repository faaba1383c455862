#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace mts {

/// Exact rationals. Every norm path uses these; floating point never
/// appears in a comparison that feeds a certificate.
using Rational = mpq_class;

/// `num/den` or `num`; canonicalized. Throws ParseError.
Rational parse_rational(std::string_view text);
/// Always `num/den`, e.g. `1/1`, `-3/2`.
std::string to_string(const Rational& q);

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// q^k for k >= 0.
Rational pow(const Rational& q, unsigned k);

}  // namespace mts
