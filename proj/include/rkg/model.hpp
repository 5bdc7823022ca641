// Exact representation of quadratic Klein-Gordon nonlinearities.
//
// A system is (F_1, F_2) where each F_j is a rational linear combination of
// products (d^alpha u_k)(d^beta u_l) with space-time derivatives d = (d_t, d_1, d_2).
// Only the quadratic homogeneous part is represented here.
#pragma once

#include "rkg/rational.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rkg {

enum class Axis : std::uint8_t { t = 0, x1 = 1, x2 = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::t, Axis::x1, Axis::x2};

std::string_view axis_name(Axis a);
/// Minkowski metric diag(-1, 1, 1).
inline int eta(Axis a) { return a == Axis::t ? -1 : 1; }

/// Multiset of derivative axes. Stored as per-axis counts, so the
/// representation of a mixed derivative is unique.
class DerivIndex {
 public:
  DerivIndex() = default;
  DerivIndex(std::initializer_list<Axis> axes);
  static DerivIndex from_counts(int nt, int n1, int n2);

  int order() const { return counts_[0] + counts_[1] + counts_[2]; }
  int count(Axis a) const { return counts_[static_cast<int>(a)]; }
  DerivIndex with(Axis a) const;
  DerivIndex plus(const DerivIndex& other) const;
  /// Removes one occurrence of `a`; precondition count(a) > 0.
  DerivIndex without(Axis a) const;

  /// Axes in canonical (t < x1 < x2) order.
  std::vector<Axis> axes() const;
  /// "0" for no derivative, otherwise axis names joined by '.', e.g. "t.x1".
  std::string label() const;

  friend bool operator==(const DerivIndex&, const DerivIndex&) = default;
  /// Orders by total order first, then lexicographically on axes().
  friend std::strong_ordering operator<=>(const DerivIndex& a, const DerivIndex& b);

 private:
  std::array<std::uint8_t, 3> counts_{};
};

/// d^alpha u_comp, comp in {1, 2}.
struct FieldRef {
  int comp = 1;
  DerivIndex d;

  FieldRef derive(Axis a) const { return {comp, d.with(a)}; }
  FieldRef derive(const DerivIndex& extra) const { return {comp, d.plus(extra)}; }
  /// e.g. "u1", "d[t.x1]u2".
  std::string label() const;

  friend bool operator==(const FieldRef&, const FieldRef&) = default;
  friend std::strong_ordering operator<=>(const FieldRef& a, const FieldRef& b) {
    if (auto c = a.comp <=> b.comp; c != 0) return c;
    return a.d <=> b.d;
  }
};

inline FieldRef u(int comp) { return {comp, {}}; }
inline FieldRef du(int comp, std::initializer_list<Axis> axes) { return {comp, DerivIndex(axes)}; }

/// Unordered product of two field references; first <= second.
struct FactorPair {
  FieldRef first;
  FieldRef second;

  static FactorPair make(FieldRef a, FieldRef b) {
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
  }
  friend bool operator==(const FactorPair&, const FactorPair&) = default;
  friend auto operator<=>(const FactorPair&, const FactorPair&) = default;
};

/// A term key of the system: which equation plus the canonical factor pair.
struct Monomial {
  int eq = 1;
  FactorPair factors;

  static Monomial make(int eq, FieldRef a, FieldRef b) { return {eq, FactorPair::make(a, b)}; }
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// Sparse bilinear expression sum c * (first)(second) with exact coefficients.
/// Zero coefficients are never stored.
class QuadForm {
 public:
  using Map = std::map<FactorPair, Rational>;

  void add(const FieldRef& a, const FieldRef& b, const Rational& c);
  void add(const FactorPair& p, const Rational& c);
  Rational coeff(const FieldRef& a, const FieldRef& b) const;

  QuadForm& operator+=(const QuadForm& o);
  QuadForm& operator-=(const QuadForm& o);
  QuadForm& operator*=(const Rational& c);
  friend QuadForm operator+(QuadForm a, const QuadForm& b) { return a += b; }
  friend QuadForm operator-(QuadForm a, const QuadForm& b) { return a -= b; }
  friend QuadForm operator*(const Rational& c, QuadForm a) { return a *= c; }
  friend bool operator==(const QuadForm&, const QuadForm&) = default;

  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Map::const_iterator begin() const { return terms_.begin(); }
  Map::const_iterator end() const { return terms_.end(); }
  const Map& terms() const { return terms_; }

  /// Largest derivative order carried by any factor.
  int max_order() const;
  /// Restricts to terms whose component pair is {k, l}.
  QuadForm pair_part(int k, int l) const;

 private:
  Map terms_;
};

std::string to_string(const QuadForm& f);

// Bilinear building blocks on field references.
QuadForm product(const FieldRef& a, const FieldRef& b, const Rational& c = 1);
/// Q_0(a, b) = (d_t a)(d_t b) - grad a . grad b.
QuadForm q0_form(const FieldRef& a, const FieldRef& b);
/// Q_{ab}(f, g) = (d_a f)(d_b g) - (d_b f)(d_a g).
QuadForm qab_form(Axis a, Axis b, const FieldRef& f, const FieldRef& g);

struct MassPair {
  Rational m1{1};
  Rational m2{2};

  const Rational& mass(int k) const { return k == 1 ? m1 : m2; }
  bool resonant() const { return m2 == 2 * m1; }
  friend bool operator==(const MassPair&, const MassPair&) = default;
};

// Generators of the null structure under m2 = 2 m1 (expansions use the
// supplied masses; only m1 enters).
/// G_1(v1, w2) = Q_0(v1, w2) - 2 m1^2 v1 w2.
QuadForm g1_form(const FieldRef& v1, const FieldRef& w2, const MassPair& m);
/// G_2(v1, w1) = Q_0(v1, w1) + m1^2 v1 w1.
QuadForm g2_form(const FieldRef& v1, const FieldRef& w1, const MassPair& m);
/// H_{1,a}(v1, w2) = v1 d_a w2 + 2 w2 d_a v1.
QuadForm h1_form(Axis a, const FieldRef& v1, const FieldRef& w2);
/// H_{2,a}(v1, w1) = v1 d_a w1 - w1 d_a v1.
QuadForm h2_form(Axis a, const FieldRef& v1, const FieldRef& w1);

struct QuadraticSystem {
  MassPair masses;
  std::array<QuadForm, 2> F;  // F[0] = F_1, F[1] = F_2

  const QuadForm& eq(int j) const { return F.at(j - 1); }
  QuadForm& eq(int j) { return F.at(j - 1); }

  /// All terms as (monomial, coefficient), sorted by monomial key.
  std::vector<std::pair<Monomial, Rational>> terms() const;

  QuadraticSystem scaled(const Rational& c) const;
  friend bool operator==(const QuadraticSystem&, const QuadraticSystem&) = default;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Structural admissibility: mass positivity and ordering, quasi-linearity,
/// gamma_00 = 0, and the quadratic-level symmetry gamma^{12}_{ab} = gamma^{21}_{ab}:
///   coeff of (d^alpha u_l)(d_a d_b u_2) in F_1 == coeff of (d^alpha u_l)(d_a d_b u_1) in F_2
/// for every l, |alpha| <= 1 and (a, b) != (t, t).
ValidationReport validate(const QuadraticSystem& system);

class InvalidSystem : public std::runtime_error {
 public:
  explicit InvalidSystem(ValidationReport r);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Throws InvalidSystem when validate() reports violations.
void require_valid(const QuadraticSystem& system);

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strict JSON reader for the system file format. Errors carry line/column
/// for syntax problems and a JSON pointer for semantic ones.
QuadraticSystem parse_system(std::string_view text);
/// Canonical compact JSON; parse_system(serialize_system(s)) == s.
std::string serialize_system(const QuadraticSystem& system, int indent = -1);

/// Constants of the two-parameter-family null example:
///   F_1 = sum_a p_a G_1(u1, d_a u2) + sum_{a+b>0} q_ab H_{1,a}(u1, d_b u2)
///       + sum_a r_a G_1(d_a u1, u2) + sum_{a+b>0} s_ab H_{1,a}(d_b u1, u2)
///   F_2 = sum_a p_a G_2(u1, d_a u1) + sum_{a+b>0} q_ab H_{2,a}(u1, d_b u1)
/// with a in {x1, x2} for p and r. Index [0] of p, r is x1; q, s use axis order t, x1, x2.
struct NullExampleParams {
  std::array<Rational, 2> p{Rational(1), Rational(0)};
  std::array<std::array<Rational, 3>, 3> q{};
  std::array<Rational, 2> r{};
  std::array<std::array<Rational, 3>, 3> s{};
};

QuadraticSystem null_example(const NullExampleParams& params, const MassPair& masses = {});

/// Named reference systems, all with masses (1, 2):
///   nonnull_resonant  F_1 = u1 u2, F_2 = u1^2
///   null_example      null_example() with default params
///   strongnull_only   F_1 = Q_{t x1}(u1, u2), F_2 = 0
///   null_semilinear   F_1 = G_1(u1, u2), F_2 = G_2(u1, u1)
std::map<std::string, QuadraticSystem> builtin_systems();

}  // namespace rkg
