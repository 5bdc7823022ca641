#include "rkg/normalform.hpp"

#include "rkg/linsolve.hpp"

#include <set>
#include <sstream>
#include <tuple>

namespace rkg {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Resonance matrices

Rational resonance_det_product(int j, int k, int l, const MassPair& masses) {
  const Rational& mj = masses.mass(j);
  const Rational& mk = masses.mass(k);
  const Rational& ml = masses.mass(l);
  Rational det = 1;
  for (int s1 : {1, -1})
    for (int s2 : {1, -1}) det *= mj + s1 * mk + s2 * ml;
  return det;
}

ResonanceMatrix resonance_matrix(int j, int k, int l, const MassPair& masses) {
  for (int idx : {j, k, l})
    if (idx != 1 && idx != 2) throw std::invalid_argument("resonance_matrix: indices must be 1 or 2");
  const Rational mj2 = masses.mass(j) * masses.mass(j);
  const Rational mk2 = masses.mass(k) * masses.mass(k);
  const Rational ml2 = masses.mass(l) * masses.mass(l);
  ResonanceMatrix r;
  r.j = j;
  r.k = k;
  r.l = l;
  const Rational diag = mj2 - mk2 - ml2;
  r.entries = {{{diag, Rational(2 * mk2 * ml2)}, {Rational(2), diag}}};
  r.det = r.entries[0][0] * r.entries[1][1] - r.entries[0][1] * r.entries[1][0];
  if (r.det != resonance_det_product(j, k, l, masses))
    throw std::logic_error("resonance_matrix: determinant disagrees with product formula");
  r.invertible = sgn(r.det) != 0;
  if (r.invertible) {
    // A^{-1} (1, 0)^T = (a22, -a21) / det.
    r.p = Vec2{Rational(r.entries[1][1] / r.det), Rational(-r.entries[1][0] / r.det)};
  }
  return r;
}

std::vector<ResonanceMatrix> classify_resonance(const MassPair& masses) {
  std::vector<ResonanceMatrix> out;
  for (int j = 1; j <= 2; ++j)
    for (int k = 1; k <= 2; ++k)
      for (int l = k; l <= 2; ++l) out.push_back(resonance_matrix(j, k, l, masses));
  return out;
}

namespace {

// True iff every column of A is a multiple of v and A != 0.
bool spans_column_space(const Mat2& a, const Vec2& v) {
  bool nonzero = false;
  for (int c = 0; c < 2; ++c) {
    const Rational& x = a[0][c];
    const Rational& y = a[1][c];
    if (sgn(x) != 0 || sgn(y) != 0) nonzero = true;
    if (x * v[1] - y * v[0] != 0) return false;
  }
  return nonzero;
}

}  // namespace

DegenerateImages degenerate_images(const MassPair& masses) {
  if (!masses.resonant()) throw std::invalid_argument("degenerate_images: masses must satisfy m2 = 2 m1");
  const Rational m1sq = masses.m1 * masses.m1;
  DegenerateImages img{{Rational(-2 * m1sq), Rational(1)}, {m1sq, Rational(1)}};
  const auto a112 = resonance_matrix(1, 1, 2, masses);
  const auto a211 = resonance_matrix(2, 1, 1, masses);
  if (a112.invertible || a211.invertible || !spans_column_space(a112.entries, img.a112) ||
      !spans_column_space(a211.entries, img.a211))
    throw std::logic_error("degenerate_images: image direction does not span the column space");
  return img;
}

// ---------------------------------------------------------------------------
// Generator basis

namespace {

std::vector<DerivIndex> jets_upto_one() {
  return {DerivIndex{}, DerivIndex{Axis::t}, DerivIndex{Axis::x1}, DerivIndex{Axis::x2}};
}

constexpr std::array<std::pair<Axis, Axis>, 3> kQPairs{
    {{Axis::t, Axis::x1}, {Axis::t, Axis::x2}, {Axis::x1, Axis::x2}}};

std::string deco(const DerivIndex& a, const DerivIndex& b) { return "[" + a.label() + "," + b.label() + "]"; }

}  // namespace

const Generator* GeneratorBasis::find(const std::string& name) const {
  for (const auto* list : {&f1, &f2})
    for (const auto& g : *list)
      if (g.name == name) return &g;
  return nullptr;
}

GeneratorBasis generator_basis(const MassPair& masses) {
  GeneratorBasis basis;
  basis.masses = masses;
  const auto jets = jets_upto_one();

  for (const auto& al : jets)
    for (const auto& be : jets) {
      if (al.order() + be.order() > 1) continue;
      Generator g{"G1" + deco(al, be), GeneratorKind::G1, 1, {1, al}, {2, be}};
      g.expansion = g1_form(g.v, g.w, masses);
      basis.f1.push_back(std::move(g));
    }
  for (Axis a : kAxes)
    for (const auto& al : jets)
      for (const auto& be : jets) {
        Generator g{"H1_" + std::string(axis_name(a)) + deco(al, be), GeneratorKind::H1, 1, {1, al}, {2, be}, a};
        g.expansion = h1_form(a, g.v, g.w);
        basis.f1.push_back(std::move(g));
      }
  for (auto [a, b] : kQPairs)
    for (const auto& al : jets)
      for (const auto& be : jets) {
        if (al.order() + be.order() > 1) continue;
        Generator g{"Q12_" + std::string(axis_name(a)) + "_" + std::string(axis_name(b)) + deco(al, be),
                    GeneratorKind::Q12, 1, {1, al}, {2, be}, a, b};
        g.expansion = qab_form(a, b, g.v, g.w);
        basis.f1.push_back(std::move(g));
      }

  const DerivIndex none;
  for (const auto& al : jets) {
    Generator g{"G2" + deco(none, al), GeneratorKind::G2, 2, {1, none}, {1, al}};
    g.expansion = g2_form(g.v, g.w, masses);
    basis.f2.push_back(std::move(g));
  }
  for (Axis a : kAxes)
    for (Axis b : kAxes) {
      const DerivIndex db{b};
      Generator g{"H2_" + std::string(axis_name(a)) + deco(none, db), GeneratorKind::H2, 2, {1, none}, {1, db}, a};
      g.expansion = h2_form(a, g.v, g.w);
      basis.f2.push_back(std::move(g));
    }
  for (auto [a, b] : kQPairs)
    for (Axis c : kAxes) {
      const DerivIndex dc{c};
      Generator g{"Q11_" + std::string(axis_name(a)) + "_" + std::string(axis_name(b)) + deco(none, dc),
                  GeneratorKind::Q11, 2, {1, none}, {1, dc}, a, b};
      g.expansion = qab_form(a, b, g.v, g.w);
      basis.f2.push_back(std::move(g));
    }
  return basis;
}

// ---------------------------------------------------------------------------
// On-shell reduction and strong null fitting

namespace {

using Combination = std::map<FieldRef, Rational>;

Combination reduce_factor(const FieldRef& f, const MassPair& masses) {
  if (f.d.count(Axis::t) < 2) return {{f, Rational(1)}};
  const DerivIndex rest = f.d.without(Axis::t).without(Axis::t);
  Combination out;
  auto accumulate = [&](const FieldRef& g, const Rational& c) {
    for (const auto& [h, v] : reduce_factor(g, masses)) {
      auto& slot = out[h];
      slot += c * v;
    }
  };
  accumulate(FieldRef{f.comp, rest.with(Axis::x1).with(Axis::x1)}, 1);
  accumulate(FieldRef{f.comp, rest.with(Axis::x2).with(Axis::x2)}, 1);
  accumulate(FieldRef{f.comp, rest}, Rational(-masses.mass(f.comp) * masses.mass(f.comp)));
  std::erase_if(out, [](const auto& kv) { return sgn(kv.second) == 0; });
  return out;
}

std::array<int, 3> parity_class(const FactorPair& p) {
  std::array<int, 3> out{};
  for (int i = 0; i < 3; ++i)
    out[i] = (p.first.d.count(kAxes[i]) + p.second.d.count(kAxes[i])) % 2;
  return out;
}

// Canonical jets of one component: at most one d_t, total order <= max_order.
std::vector<FieldRef> canonical_jets(int comp, int max_order) {
  std::vector<FieldRef> out;
  for (int order = 0; order <= max_order; ++order)
    for (int nt = 0; nt <= std::min(1, order); ++nt)
      for (int n1 = order - nt; n1 >= 0; --n1) out.push_back({comp, DerivIndex::from_counts(nt, n1, order - nt - n1)});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

QuadForm reduce_on_shell(const QuadForm& form, const MassPair& masses) {
  QuadForm out;
  for (const auto& [p, c] : form) {
    const auto a = reduce_factor(p.first, masses);
    const auto b = reduce_factor(p.second, masses);
    for (const auto& [fa, ca] : a)
      for (const auto& [fb, cb] : b) out.add(fa, fb, c * ca * cb);
  }
  return out;
}

QuadForm klein_gordon_quadratic(const QuadForm& form, int j, const MassPair& masses) {
  QuadForm out;
  const Rational mj2 = masses.mass(j) * masses.mass(j);
  for (const auto& [p, c] : form) {
    const Rational mk2 = masses.mass(p.first.comp) * masses.mass(p.first.comp);
    const Rational ml2 = masses.mass(p.second.comp) * masses.mass(p.second.comp);
    out.add(p, c * (mj2 - mk2 - ml2));
    out += Rational(2 * c) * q0_form(p.first, p.second);
  }
  return out;
}

QuadForm expand(const std::vector<NullFormTerm>& terms) {
  QuadForm out;
  for (const auto& t : terms) out += t.coeff * qab_form(t.a, t.b, t.first, t.second);
  return out;
}

std::optional<std::vector<NullFormTerm>> fit_strong_null(const QuadForm& form, const MassPair& masses,
                                                         int max_order) {
  const QuadForm target = reduce_on_shell(form, masses);
  // Reduction preserves the component pair and the parity of each axis count,
  // so the fit splits into independent blocks.
  using BlockKey = std::tuple<int, int, std::array<int, 3>>;
  std::map<BlockKey, std::map<FactorPair, Rational>> blocks;
  for (const auto& [p, c] : target)
    blocks[{p.first.comp, p.second.comp, parity_class(p)}].emplace(p, c);

  std::vector<NullFormTerm> result;
  for (const auto& [key, rhs] : blocks) {
    const auto& [k, l, parity] = key;
    int top = 0;
    for (const auto& [p, c] : rhs) top = std::max(top, p.first.d.order() + p.second.d.order());

    auto attempt = [&](int total_cap) -> std::optional<std::vector<NullFormTerm>> {
      ExactSpan<FactorPair> span;
      std::vector<NullFormTerm> cols;
      const auto jets_k = canonical_jets(k, max_order);
      const auto jets_l = canonical_jets(l, max_order);
      for (auto [a, b] : kQPairs)
        for (const auto& fa : jets_k)
          for (const auto& fb : jets_l) {
            if (k == l && !(fa < fb)) continue;
            if (fa.d.order() + fb.d.order() + 2 > total_cap) continue;
            FactorPair probe = FactorPair::make(fa.derive(a), fb.derive(b));
            if (parity_class(probe) != parity) continue;
            QuadForm col = reduce_on_shell(qab_form(a, b, fa, fb), masses);
            if (col.empty()) continue;
            span.add_column(col.terms());
            cols.push_back({a, b, fa, fb, Rational(0)});
          }
      auto sol = span.solve(rhs);
      if (!sol.feasible) return std::nullopt;
      std::vector<NullFormTerm> out;
      for (const auto& [i, c] : sol.x) {
        NullFormTerm t = cols.at(i);
        t.coeff = c;
        out.push_back(std::move(t));
      }
      return out;
    };

    auto found = attempt(top);
    if (!found) found = attempt(2 * max_order + 2);
    if (!found) return std::nullopt;
    result.insert(result.end(), found->begin(), found->end());
  }
  return result;
}

// ---------------------------------------------------------------------------
// Decomposition

NotNullError::NotNullError(std::array<QuadForm, 2> residual)
    : std::runtime_error("nonlinearity does not satisfy the null condition: cross terms are outside the "
                         "generator span"),
      residual_(std::move(residual)) {}

namespace {

void add_lambda(Decomposition& d, int j, const QuadForm& contribution, const std::string& note) {
  if (contribution.empty()) return;
  d.lambda[j - 1] += contribution;
  d.notes.push_back("Lambda_" + std::to_string(j) + " += " + to_string(contribution) + "  [" + note + "]");
}

}  // namespace

Decomposition decompose(const QuadraticSystem& system) {
  return decompose(system, generator_basis(system.masses));
}

Decomposition decompose(const QuadraticSystem& system, const GeneratorBasis& basis) {
  require_valid(system);
  if (!system.masses.resonant()) throw std::invalid_argument("decompose: masses must satisfy m2 = 2 m1");
  if (!(basis.masses == system.masses)) throw std::invalid_argument("decompose: basis built for other masses");

  const MassPair& m = system.masses;
  Decomposition d;
  d.masses = m;

  // Cross terms are F_1's (1,2) part and F_2's (1,1) part.
  const std::array<QuadForm, 2> cross{system.eq(1).pair_part(1, 2), system.eq(2).pair_part(1, 1)};
  d.free_terms[0] = system.eq(1) - cross[0];
  d.free_terms[1] = system.eq(2) - cross[1];

  std::array<QuadForm, 2> residual;
  bool feasible = true;
  std::array<std::map<int, Rational>, 2> coeffs;
  for (int j = 1; j <= 2; ++j) {
    ExactSpan<FactorPair> span;
    for (const auto& g : basis.for_eq(j)) span.add_column(g.expansion.terms());
    auto sol = span.solve(cross[j - 1].terms());
    if (!sol.feasible) {
      feasible = false;
      for (const auto& [p, c] : sol.residual) residual[j - 1].add(p, c);
    }
    coeffs[j - 1] = std::move(sol.x);
  }
  if (!feasible) throw NotNullError(std::move(residual));

  const Rational m1sq = m.m1 * m.m1;
  for (int j = 1; j <= 2; ++j) {
    for (const auto& [idx, c] : coeffs[j - 1]) {
      const Generator& g = basis.for_eq(j).at(idx);
      d.coefficients[g.name] = c;
      switch (g.kind) {
        case GeneratorKind::G1:
          add_lambda(d, 1, product(g.v, g.w, Rational(c / 2)), to_string(c) + " * " + g.name);
          break;
        case GeneratorKind::G2:
          add_lambda(d, 2, product(g.v, g.w, Rational(c / 2)), to_string(c) + " * " + g.name);
          break;
        case GeneratorKind::H1:
          add_lambda(d, 1, product(g.v, g.w.derive(g.a), Rational(c / (-4 * m1sq))), to_string(c) + " * " + g.name);
          break;
        case GeneratorKind::H2:
          add_lambda(d, 2, product(g.v, g.w.derive(g.a), Rational(c / (2 * m1sq))), to_string(c) + " * " + g.name);
          break;
        case GeneratorKind::Q12:
        case GeneratorKind::Q11:
          break;
      }
    }
  }

  // Self-interaction terms sit on invertible resonance matrices.
  for (int j = 1; j <= 2; ++j) {
    for (const auto& [p, c] : d.free_terms[j - 1]) {
      const auto a = resonance_matrix(j, p.first.comp, p.second.comp, m);
      if (!a.invertible)
        throw std::logic_error("decompose: free term on degenerate resonance matrix A_" + std::to_string(j) +
                               std::to_string(p.first.comp) + std::to_string(p.second.comp));
      QuadForm contribution = product(p.first, p.second, Rational(c * (*a.p)[0]));
      contribution += Rational(c * (*a.p)[1]) * q0_form(p.first, p.second);
      add_lambda(d, j, contribution,
                 to_string(c) + " * " + p.first.label() + "*" + p.second.label() + " via A_" + std::to_string(j) +
                     std::to_string(p.first.comp) + std::to_string(p.second.comp));
    }
  }

  for (int j = 1; j <= 2; ++j) {
    QuadForm rest = system.eq(j) - klein_gordon_quadratic(d.lambda[j - 1], j, m);
    auto fit = fit_strong_null(rest, m);
    if (!fit)
      throw std::logic_error("decompose: remainder of F_" + std::to_string(j) +
                             " after the normal form is not a strong null combination");
    d.strongnull_remainder[j - 1] = std::move(*fit);
  }
  return d;
}

std::array<QuadForm, 2> reconstruct(const Decomposition& d, const GeneratorBasis& basis) {
  std::array<QuadForm, 2> out;
  for (const auto& [name, c] : d.coefficients) {
    const Generator* g = basis.find(name);
    if (!g) throw std::invalid_argument("reconstruct: unknown generator " + name);
    out[g->eq - 1] += c * g->expansion;
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json deriv_json(const DerivIndex& d) {
  json a = json::array();
  for (Axis x : d.axes()) a.push_back(std::string(axis_name(x)));
  return a;
}

json field_json(const FieldRef& f) { return {{"comp", f.comp}, {"deriv", deriv_json(f.d)}}; }

}  // namespace

json quadform_json(const QuadForm& f, int eq) {
  json a = json::array();
  for (const auto& [p, c] : f) {
    a.push_back({{"eq", eq},
                 {"k", p.first.comp},
                 {"l", p.second.comp},
                 {"alpha", deriv_json(p.first.d)},
                 {"beta", deriv_json(p.second.d)},
                 {"coeff", to_string(c)}});
  }
  return a;
}

json decomposition_json(const Decomposition& d) {
  json j;
  json gens = json::object();
  for (const auto& [name, c] : d.coefficients) gens[name] = to_string(c);
  j["generators"] = gens;
  json lambda = json::array();
  json free = json::array();
  json strong = json::array();
  for (int e = 1; e <= 2; ++e) {
    for (auto& t : quadform_json(d.lambda[e - 1], e)) lambda.push_back(t);
    for (auto& t : quadform_json(d.free_terms[e - 1], e)) free.push_back(t);
    for (const auto& t : d.strongnull_remainder[e - 1]) {
      strong.push_back({{"eq", e},
                        {"a", std::string(axis_name(t.a))},
                        {"b", std::string(axis_name(t.b))},
                        {"first", field_json(t.first)},
                        {"second", field_json(t.second)},
                        {"coeff", to_string(t.coeff)}});
    }
  }
  j["lambda"] = lambda;
  j["free_terms"] = free;
  j["strongnull"] = strong;
  j["notes"] = d.notes;
  j["residual"] = nullptr;
  return j;
}

json resonance_json(const std::vector<ResonanceMatrix>& cells) {
  json out = json::array();
  for (const auto& r : cells) {
    json e = json::array();
    for (const auto& row : r.entries) e.push_back({to_string(row[0]), to_string(row[1])});
    json cell{{"j", r.j}, {"k", r.k}, {"l", r.l}, {"entries", e}, {"det", to_string(r.det)}, {"invertible", r.invertible}};
    cell["p"] = r.p ? json{to_string((*r.p)[0]), to_string((*r.p)[1])} : json(nullptr);
    out.push_back(std::move(cell));
  }
  return out;
}

}  // namespace rkg
