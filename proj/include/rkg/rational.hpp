// Exact scalar types for the symbolic engine.
#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace rkg {

/// Arbitrary-precision rational, always kept in lowest terms.
using Rational = mpq_class;

/// Parses "p" or "p/q" (optional leading '-', decimal digits only).
/// Returns nullopt on malformed input; throws std::domain_error on q == 0.
std::optional<Rational> parse_rational(std::string_view text);

/// Canonical text form: "p" when the denominator is 1, otherwise "p/q".
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Gaussian rational re + i*im.
struct GaussRat {
  Rational re{0};
  Rational im{0};

  GaussRat() = default;
  GaussRat(Rational r) : re(std::move(r)) {}
  GaussRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussRat i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }

  GaussRat& operator+=(const GaussRat& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRat& operator-=(const GaussRat& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussRat& operator*=(const GaussRat& o) {
    Rational r = re * o.re - im * o.im;
    Rational m = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(m);
    return *this;
  }
  GaussRat operator-() const { return {Rational(-re), Rational(-im)}; }

  friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
  friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
  friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re == b.re && a.im == b.im;
  }
};

/// "a", "b*i", "a + b*i" style text with exact rationals.
std::string to_string(const GaussRat& z);
std::ostream& operator<<(std::ostream& os, const GaussRat& z);

}  // namespace rkg
