#include "rkg/nullcheck.hpp"

#include <sstream>

namespace rkg {

using nlohmann::json;

OmegaPoly phi_of(const QuadForm& form, const MassPair& masses, int j) {
  return fourier_pick(substitute(form, masses), j);
}

NullVerdict check_null(const QuadraticSystem& system) {
  require_valid(system);
  return evaluate_null(system);
}

NullVerdict evaluate_null(const QuadraticSystem& system) {
  NullVerdict v;
  v.resonant = system.masses.resonant();
  for (int j = 1; j <= 2; ++j) {
    v.phi_unreduced[j - 1] = fourier_pick(substitute(system, j), j);
    v.phi[j - 1] = reduce_hyperboloid(v.phi_unreduced[j - 1]);
  }
  v.is_null = v.phi[0].is_zero() && v.phi[1].is_zero();
  return v;
}

namespace {

std::vector<std::array<Rational, 3>> witness_points() {
  std::vector<std::array<Rational, 3>> pts;
  pts.push_back({Rational(1), Rational(0), Rational(0)});
  // Projection parameters a, b from a small grid of fractions, smallest denominators first.
  std::vector<Rational> params;
  for (int den = 2; den <= 5; ++den)
    for (int num = 1; num < den; ++num) {
      Rational q(num, den);
      q.canonicalize();
      if (q.get_den() != den) continue;
      params.push_back(q);
      params.push_back(-q);
    }
  std::vector<Rational> with_zero{Rational(0)};
  with_zero.insert(with_zero.end(), params.begin(), params.end());
  for (const auto& a : with_zero) {
    for (const auto& b : with_zero) {
      if (sgn(a) == 0 && sgn(b) == 0) continue;
      Rational r2 = a * a + b * b;
      if (r2 >= 1) continue;
      Rational t = Rational(2) / (Rational(1) - r2);
      pts.push_back({Rational(t - 1), Rational(t * a), Rational(t * b)});
    }
  }
  return pts;
}

std::string omega_text(const std::array<Rational, 3>& w) {
  return "(" + to_string(w[0]) + ", " + to_string(w[1]) + ", " + to_string(w[2]) + ")";
}

}  // namespace

std::optional<Witness> find_witness(const NullVerdict& v) {
  if (v.is_null) return std::nullopt;
  const auto pts = witness_points();
  for (int j = 1; j <= 2; ++j) {
    if (v.phi[j - 1].is_zero()) continue;
    for (const auto& w : pts) {
      GaussRat val = v.phi[j - 1].evaluate(w);
      if (!val.is_zero()) return Witness{j, w, val};
    }
  }
  return std::nullopt;
}

std::string certificate_report(const NullVerdict& v) {
  std::ostringstream os;
  os << "masses resonant (m2 = 2 m1): " << (v.resonant ? "yes" : "no") << "\n";
  if (!v.resonant)
    os << "note: non-resonant masses; the null condition is not required for global existence\n";
  for (int j = 1; j <= 2; ++j) os << "Phi_" << j << " = " << to_string(v.phi[j - 1]) << "\n";
  if (v.is_null) {
    os << "null condition: SATISFIED\n";
    return os.str();
  }
  os << "null condition: VIOLATED\n";
  if (auto w = find_witness(v)) {
    os << "witness: Phi_" << w->j << omega_text(w->omega) << " = " << to_string(w->value) << "\n";
  } else {
    for (int j = 1; j <= 2; ++j) {
      const auto& p = v.phi[j - 1];
      if (p.is_zero()) continue;
      auto lead = std::prev(p.end());
      os << "no small witness found; Phi_" << j << " is a nonzero reduced polynomial with leading term "
         << to_string(lead->second) << " * w^(" << lead->first[0] << "," << lead->first[1] << ","
         << lead->first[2] << ")\n";
    }
  }
  return os.str();
}

json verdict_json(const NullVerdict& v) {
  json j;
  j["is_null"] = v.is_null;
  j["resonant"] = v.resonant;
  j["phi1"] = to_json(v.phi[0]);
  j["phi2"] = to_json(v.phi[1]);
  j["phi1_text"] = to_string(v.phi[0]);
  j["phi2_text"] = to_string(v.phi[1]);
  if (auto w = find_witness(v)) {
    j["witness"] = {{"phi", w->j},
                    {"omega", {to_string(w->omega[0]), to_string(w->omega[1]), to_string(w->omega[2])}},
                    {"re", to_string(w->value.re)},
                    {"im", to_string(w->value.im)}};
  }
  return j;
}

}  // namespace rkg
