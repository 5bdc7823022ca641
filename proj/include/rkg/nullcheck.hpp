// Exact decision of the resonant null condition.
//
// Phi_j(w) = int_0^1 F^quad_j(U, V, W) exp(-2 pi i j theta) d theta, reduced
// modulo the unit hyperboloid; the system is null iff Phi_1 = Phi_2 = 0 there.
#pragma once

#include "rkg/model.hpp"
#include "rkg/trigpoly.hpp"

#include <json.hpp>

#include <array>
#include <optional>
#include <string>

namespace rkg {

struct Witness {
  int j = 1;                      // which Phi is nonzero
  std::array<Rational, 3> omega;  // exact point on the upper sheet
  GaussRat value;
};

struct NullVerdict {
  bool is_null = false;
  bool resonant = false;
  std::array<OmegaPoly, 2> phi;          // hyperboloid-reduced
  std::array<OmegaPoly, 2> phi_unreduced;
};

/// Throws InvalidSystem for inadmissible input.
NullVerdict check_null(const QuadraticSystem& system);

/// Same computation without structural validation. Some single generators
/// (e.g. G1(u1, d_t u2), which carries a d_t d_t factor) are not admissible
/// systems on their own but still have a well-defined Phi.
NullVerdict evaluate_null(const QuadraticSystem& system);

/// Phi_j for a single equation without validation (used by property tests
/// and by the decomposition cross-checks on generator fragments).
OmegaPoly phi_of(const QuadForm& form, const MassPair& masses, int j);

/// Searches a deterministic set of rational points on the w0 > 0 sheet,
/// obtained by stereographic projection from (-1, 0, 0):
///   w = (-1 + t, t a, t b), t = 2 / (1 - a^2 - b^2), a^2 + b^2 < 1.
/// The apex (1, 0, 0) is tried first.
std::optional<Witness> find_witness(const NullVerdict& v);

/// Human-readable certificate, e.g. "Phi_1 = 1/4" lines plus a witness.
std::string certificate_report(const NullVerdict& v);

/// {is_null, resonant, phi1, phi2, phi1_text, phi2_text, witness?}.
nlohmann::json verdict_json(const NullVerdict& v);

}  // namespace rkg
