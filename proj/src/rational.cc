// SPDX-License-Identifier: Apache-2.0

#include "bcd/rational.h"

#include <algorithm>
#include <cctype>

namespace bcd {
namespace {

bool IsIntegerLiteral(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

Integer Pow10(int64_t e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return r;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  std::string_view num = text;
  std::string_view den = "1";
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
  }
  if (!IsIntegerLiteral(num) || !IsIntegerLiteral(den) || den.front() == '-' ||
      den.front() == '+') {
    throw std::invalid_argument("not an exact rational literal: '" +
                                std::string(text) + "'");
  }
  if (num.front() == '+') num.remove_prefix(1);
  Integer n(std::string(num), 10);
  Integer d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational x(n, d);
  x.canonicalize();
  return x;
}

std::string ToString(const Rational& x) {
  Rational y = x;
  y.canonicalize();
  return y.get_num().get_str() + "/" + y.get_den().get_str();
}

std::string ToDecimal(const Rational& x, int digits) {
  if (x == 0) return "0";
  std::string sign = sgn(x) < 0 ? "-" : "";
  Rational a = abs(x);
  // Find e with 10^e <= a < 10^(e+1), starting from a bit-length estimate.
  int64_t bits = static_cast<int64_t>(mpz_sizeinbase(a.get_num_mpz_t(), 2)) -
                 static_cast<int64_t>(mpz_sizeinbase(a.get_den_mpz_t(), 2));
  int64_t e = (bits * 30103) / 100000;
  auto pow10 = [](int64_t k) {
    return k >= 0 ? Rational(Pow10(k)) : Rational(Integer(1), Pow10(-k));
  };
  while (pow10(e) > a) --e;
  while (pow10(e + 1) <= a) ++e;
  Rational scaled = a / pow10(e - (digits - 1));
  Integer mant = scaled.get_num() / scaled.get_den();
  // Round half up on the next digit.
  if (2 * (scaled - Rational(mant)) >= 1) mant += 1;
  std::string m = mant.get_str();
  if (static_cast<int>(m.size()) > digits) {
    m.pop_back();
    ++e;
  }
  while (m.size() > 1 && m.back() == '0') m.pop_back();
  if (e >= -4 && e < digits) {
    std::string out;
    if (e >= 0) {
      std::string ip = m.substr(0, std::min<size_t>(m.size(), e + 1));
      while (static_cast<int64_t>(ip.size()) < e + 1) ip.push_back('0');
      std::string fp = m.size() > static_cast<size_t>(e + 1) ? m.substr(e + 1) : "";
      out = fp.empty() ? ip : ip + "." + fp;
    } else {
      out = "0." + std::string(-e - 1, '0') + m;
    }
    return sign + out;
  }
  std::string out = m.substr(0, 1);
  if (m.size() > 1) out += "." + m.substr(1);
  return sign + out + "e" + (e < 0 ? "-" : "+") + std::to_string(e < 0 ? -e : e);
}

Rational Pow2(int64_t e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e >= 0 ? Rational(p) : Rational(Integer(1), p);
}

Rational Dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("dot product of vectors with lengths " +
                         std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  }
  return s;
}

Rational Sum(const Vector& a) {
  Rational s = 0;
  for (const Rational& x : a) s += x;
  return s;
}

Vector Add(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("vector sum length mismatch");
  Vector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vector Sub(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("vector difference length mismatch");
  Vector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vector Scale(const Rational& s, const Vector& a) {
  Vector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

Vector Zeros(size_t n) { return Vector(n, Rational(0)); }

bool IsZero(const Vector& a) {
  return std::all_of(a.begin(), a.end(), [](const Rational& x) { return sgn(x) == 0; });
}

bool ExactSqrt(const Rational& x, Rational* root) {
  if (sgn(x) < 0) return false;
  if (!mpz_perfect_square_p(x.get_num_mpz_t()) ||
      !mpz_perfect_square_p(x.get_den_mpz_t())) {
    return false;
  }
  Integer n, d;
  mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
  *root = Rational(n, d);
  root->canonicalize();
  return true;
}

Rational SqrtUpper(const Rational& x, int bits) {
  if (sgn(x) < 0) throw std::invalid_argument("square root of a negative rational");
  Rational root;
  if (ExactSqrt(x, &root)) return root;
  // sqrt(p/q) = sqrt(p*q)/q. Scale by 4^bits, take the integer root, round up.
  Integer pq = x.get_num() * x.get_den();
  Integer scaled = pq << (2 * bits);
  Integer s;
  mpz_sqrt(s.get_mpz_t(), scaled.get_mpz_t());
  s += 1;
  Rational up(s, x.get_den() << bits);
  up.canonicalize();
  return up;
}

int64_t BitLength(const Rational& x) {
  return static_cast<int64_t>(mpz_sizeinbase(x.get_num_mpz_t(), 2) +
                              mpz_sizeinbase(x.get_den_mpz_t(), 2));
}

}  // namespace bcd
