#pragma once

#include <complex>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "dq/errors.hpp"

namespace dq {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "p", "-p" or "p/q". Throws ParseError on anything else or q = 0.
inline Rational parse_rational(const std::string& text) {
  const auto fail = [&] {
    throw ParseError("malformed rational '" + text + "'", 0);
  };
  if (text.empty()) fail();
  std::size_t slash = text.find('/');
  auto digits_ok = [](const std::string& s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = (allow_sign && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  using Int = boost::multiprecision::cpp_int;
  if (slash == std::string::npos) {
    if (!digits_ok(text, true)) fail();
    return Rational(Int(text));
  }
  std::string num = text.substr(0, slash);
  std::string den = text.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false)) fail();
  Int d(den);
  if (d == 0) fail();
  return Rational(Int(num), d);
}

inline std::string to_string(const Rational& r) { return r.str(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Complex number with exact rational real and imaginary parts.
struct CRational {
  Rational re{0};
  Rational im{0};

  CRational() = default;
  CRational(Rational r) : re(std::move(r)) {}  // NOLINT: implicit by intent
  CRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  CRational(long long r) : re(r) {}  // NOLINT

  static CRational i_unit() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  CRational conj() const { return {re, -im}; }

  std::complex<double> to_complex() const {
    return {to_double(re), to_double(im)};
  }

  CRational& operator+=(const CRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  CRational& operator-=(const CRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  CRational& operator*=(const CRational& o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }

  friend CRational operator+(CRational a, const CRational& b) { return a += b; }
  friend CRational operator-(CRational a, const CRational& b) { return a -= b; }
  friend CRational operator*(CRational a, const CRational& b) { return a *= b; }
  friend CRational operator-(const CRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const CRational& a, const CRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  /// Multiplicative inverse; throws ContractError for zero.
  CRational inverse() const {
    Rational n = re * re + im * im;
    if (n == 0) throw ContractError("division by zero");
    return {re / n, -im / n};
  }
};

}  // namespace dq
