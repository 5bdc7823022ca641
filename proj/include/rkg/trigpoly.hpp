// Polynomials in omega = (w0, w1, w2) over Gaussian rationals, finite Fourier
// series in theta with polynomial coefficients, and reduction modulo the
// unit hyperboloid w0^2 - w1^2 - w2^2 = 1.
#pragma once

#include "rkg/model.hpp"
#include "rkg/rational.hpp"

#include <json.hpp>

#include <array>
#include <complex>
#include <map>
#include <string>

namespace rkg {

using Exponents = std::array<int, 3>;

class OmegaPoly {
 public:
  using Map = std::map<Exponents, GaussRat>;

  OmegaPoly() = default;
  static OmegaPoly constant(const GaussRat& c);
  static OmegaPoly monomial(const Exponents& e, const GaussRat& c = GaussRat(1));
  /// w_i as a polynomial, i in {0, 1, 2}.
  static OmegaPoly var(int i);

  void add_term(const Exponents& e, const GaussRat& c);
  GaussRat coeff(const Exponents& e) const;

  OmegaPoly& operator+=(const OmegaPoly& o);
  OmegaPoly& operator-=(const OmegaPoly& o);
  OmegaPoly& operator*=(const GaussRat& c);
  friend OmegaPoly operator+(OmegaPoly a, const OmegaPoly& b) { return a += b; }
  friend OmegaPoly operator-(OmegaPoly a, const OmegaPoly& b) { return a -= b; }
  friend OmegaPoly operator*(const OmegaPoly& a, const OmegaPoly& b);
  friend OmegaPoly operator*(const GaussRat& c, OmegaPoly a) { return a *= c; }
  friend bool operator==(const OmegaPoly&, const OmegaPoly&) = default;

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Map::const_iterator begin() const { return terms_.begin(); }
  Map::const_iterator end() const { return terms_.end(); }
  int degree_in(int var) const;

  GaussRat evaluate(const std::array<Rational, 3>& w) const;
  std::complex<double> evaluate(const std::array<double, 3>& w) const;

 private:
  Map terms_;
};

/// e.g. "1/4", "(-1/4*i)*w0", "w0^2 - w1^2 - 1".
std::string to_string(const OmegaPoly& p);
/// JSON array of {exponents, re, im}, sorted by exponent triple.
nlohmann::json to_json(const OmegaPoly& p);
OmegaPoly omega_poly_from_json(const nlohmann::json& j);

enum class Parity { cos = 0, sin = 1 };

/// sum_n [C_n(w) cos(2 pi n theta) + S_n(w) sin(2 pi n theta)], n >= 0.
class ThetaSeries {
 public:
  using Key = std::pair<int, Parity>;
  using Map = std::map<Key, OmegaPoly>;

  /// Frequencies must be >= 0; sin at frequency 0 is dropped.
  void add(int freq, Parity par, const OmegaPoly& c);
  OmegaPoly coeff(int freq, Parity par) const;
  ThetaSeries& operator+=(const ThetaSeries& o);
  friend bool operator==(const ThetaSeries&, const ThetaSeries&) = default;

  bool is_zero() const { return terms_.empty(); }
  int max_frequency() const;
  Map::const_iterator begin() const { return terms_.begin(); }
  Map::const_iterator end() const { return terms_.end(); }

 private:
  Map terms_;
};

/// Frequency bound for quadratic products of modes 1 and 2.
inline constexpr int kMaxThetaFrequency = 4;

/// F^quad_eq evaluated at the resonant plane-wave ansatz
///   u_k = cos(2 pi k theta), d_a u_k = -w_a m_k sin(2 pi k theta),
///   d_a d_b u_k = -w_a w_b m_k^2 cos(2 pi k theta),
/// expanded into single-frequency terms. Throws std::logic_error when a
/// frequency above kMaxThetaFrequency appears.
ThetaSeries substitute(const QuadraticSystem& system, int eq);
/// Same ansatz applied to an arbitrary bilinear form (derivative orders unrestricted).
ThetaSeries substitute(const QuadForm& form, const MassPair& masses);

/// int_0^1 series(theta) exp(-2 pi i j theta) d theta.
OmegaPoly fourier_pick(const ThetaSeries& series, int j);

/// Remainder of p modulo q = w0^2 - w1^2 - w2^2 - 1, taken as monic in w0;
/// the result has degree <= 1 in w0 and vanishes iff p vanishes on the hyperboloid.
OmegaPoly reduce_hyperboloid(const OmegaPoly& p);

}  // namespace rkg
