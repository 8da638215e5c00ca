// SPDX-License-Identifier: Apache-2.0
//
// Exact rational scalars and the small amount of dense linear algebra the
// rest of the library needs. Everything is GMP-backed; there is no floating
// point on any computation path.

#ifndef BCD_RATIONAL_H_
#define BCD_RATIONAL_H_

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bcd {

using Rational = mpq_class;
using Integer = mpz_class;
using Vector = std::vector<Rational>;
using Matrix = std::vector<Vector>;

// Parses "p/q", "p" or "-p/q". Decimal points and exponents are rejected so
// that no value ever passes through a binary float.
Rational ParseRational(std::string_view text);

// Canonical "p/q" form; integers are written as "p/1".
std::string ToString(const Rational& x);

// Decimal approximation with `digits` significant digits, for display only.
std::string ToDecimal(const Rational& x, int digits = 12);

// 2^e for any integer e, exactly.
Rational Pow2(int64_t e);

Rational Dot(const Vector& a, const Vector& b);
Rational Sum(const Vector& a);

Vector Add(const Vector& a, const Vector& b);
Vector Sub(const Vector& a, const Vector& b);
Vector Scale(const Rational& s, const Vector& a);
Vector Zeros(size_t n);

bool IsZero(const Vector& a);

// If x = q^2 for a rational q >= 0, stores q and returns true.
bool ExactSqrt(const Rational& x, Rational* root);

// Returns s >= sqrt(x) with s - sqrt(x) <= 2^-bits. Exact when x is a perfect
// rational square. Requires x >= 0.
Rational SqrtUpper(const Rational& x, int bits = 64);

// Number of bits needed to write numerator and denominator.
int64_t BitLength(const Rational& x);

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace bcd

#endif  // BCD_RATIONAL_H_
