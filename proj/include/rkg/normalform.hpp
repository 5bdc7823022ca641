// Resonance matrices, the null-structure generator basis, decomposition of
// null nonlinearities over it, and the quadratic normal-form correction Lambda.
#pragma once

#include "rkg/model.hpp"

#include <json.hpp>

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rkg {

// ---------------------------------------------------------------------------
// Resonance matrices

using Mat2 = std::array<std::array<Rational, 2>, 2>;
using Vec2 = std::array<Rational, 2>;

struct ResonanceMatrix {
  int j = 1, k = 1, l = 1;
  Mat2 entries;
  Rational det;
  bool invertible = false;
  /// (p, p~) with A (p, p~)^T = (1, 0)^T; present iff invertible.
  std::optional<Vec2> p;
};

/// A_{jkl} = [[m_j^2 - m_k^2 - m_l^2, 2 m_k^2 m_l^2], [2, m_j^2 - m_k^2 - m_l^2]].
/// The determinant is computed directly and via prod_{s1,s2 = +-1} (m_j + s1 m_k + s2 m_l);
/// a mismatch throws std::logic_error.
ResonanceMatrix resonance_matrix(int j, int k, int l, const MassPair& masses);

/// Product formula alone.
Rational resonance_det_product(int j, int k, int l, const MassPair& masses);

/// All six (j, k, l) with k <= l, in lexicographic order.
std::vector<ResonanceMatrix> classify_resonance(const MassPair& masses);

struct DegenerateImages {
  Vec2 a112;  // spans image of A_112: (-2 m1^2, 1)
  Vec2 a211;  // spans image of A_211: (m1^2, 1)
};

/// Requires m2 = 2 m1 (std::invalid_argument otherwise).
DegenerateImages degenerate_images(const MassPair& masses);

// ---------------------------------------------------------------------------
// Generators

enum class GeneratorKind { G1, H1, Q12, G2, H2, Q11 };

struct Generator {
  std::string name;
  GeneratorKind kind;
  int eq = 1;
  FieldRef v;        // first argument
  FieldRef w;        // second argument
  Axis a = Axis::t;  // H_{.,a} index, or first Q index
  Axis b = Axis::t;  // second Q index
  QuadForm expansion;
};

/// Enumerated in the fixed order G, H, Q, each in lexicographic decoration order:
///   F_1: G1(d^al u1, d^be u2), |al|+|be| <= 1; H1_a(d^al u1, d^be u2), |al|,|be| <= 1;
///        Q12_ab(d^al u1, d^be u2), a < b, |al|+|be| <= 1
///   F_2: G2(u1, d^al u1), |al| <= 1; H2_a(u1, d_b u1); Q11_ab(u1, d_c u1), a < b
struct GeneratorBasis {
  MassPair masses;
  std::vector<Generator> f1;
  std::vector<Generator> f2;

  const std::vector<Generator>& for_eq(int j) const { return j == 1 ? f1 : f2; }
  const Generator* find(const std::string& name) const;
};

GeneratorBasis generator_basis(const MassPair& masses);

// ---------------------------------------------------------------------------
// Decomposition and normal form

/// One strong null form term c * Q_ab(first, second).
struct NullFormTerm {
  Axis a = Axis::t;
  Axis b = Axis::x1;
  FieldRef first;
  FieldRef second;
  Rational coeff;
};

struct Decomposition {
  MassPair masses;
  /// Generator name -> coefficient for the cross terms (F_1's (1,2) part, F_2's (1,1) part).
  std::map<std::string, Rational> coefficients;
  /// Self-interaction terms carried through untouched: F_1's (1,1), (2,2); F_2's (1,2), (2,2).
  std::array<QuadForm, 2> free_terms;
  /// Lambda_j; factors carry at most three derivatives.
  std::array<QuadForm, 2> lambda;
  /// N_j: the quadratic remainder F_j - (box + m_j^2) Lambda_j, modulo the linear
  /// equations, written as strong null forms.
  std::array<std::vector<NullFormTerm>, 2> strongnull_remainder;
  std::vector<std::string> notes;
};

class NotNullError : public std::runtime_error {
 public:
  explicit NotNullError(std::array<QuadForm, 2> residual);
  /// Per equation: the part of the cross terms outside the generator span.
  const std::array<QuadForm, 2>& residual() const { return residual_; }

 private:
  std::array<QuadForm, 2> residual_;
};

/// Requires a valid system with m2 = 2 m1 (std::invalid_argument otherwise).
/// Throws NotNullError when the cross terms are not in the generator span.
Decomposition decompose(const QuadraticSystem& system);
Decomposition decompose(const QuadraticSystem& system, const GeneratorBasis& basis);

/// Cross-term parts rebuilt from the generator coefficients.
std::array<QuadForm, 2> reconstruct(const Decomposition& d, const GeneratorBasis& basis);

/// Expansion of sum c * Q_ab(first, second) as a bilinear form.
QuadForm expand(const std::vector<NullFormTerm>& terms);

/// Quadratic part of (box + m_j^2) applied to a bilinear form, using
/// box d^al u_k = -m_k^2 d^al u_k on each factor.
QuadForm klein_gordon_quadratic(const QuadForm& form, int j, const MassPair& masses);

/// Rewrites every factor with two or more time derivatives through
/// d_t^2 u_k = (d_1^2 + d_2^2 - m_k^2) u_k, leaving at most one d_t per factor.
QuadForm reduce_on_shell(const QuadForm& form, const MassPair& masses);

/// Finds c with reduce_on_shell(form) == reduce_on_shell(sum c Q_ab(d^al u_k, d^be u_l)),
/// |al|, |be| <= max_order. Returns nullopt if no such combination exists.
std::optional<std::vector<NullFormTerm>> fit_strong_null(const QuadForm& form, const MassPair& masses,
                                                         int max_order = 3);

nlohmann::json decomposition_json(const Decomposition& d);
nlohmann::json resonance_json(const std::vector<ResonanceMatrix>& cells);
nlohmann::json quadform_json(const QuadForm& f, int eq);

}  // namespace rkg
