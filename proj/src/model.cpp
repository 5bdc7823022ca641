#include "rkg/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace rkg {

using nlohmann::json;

std::string_view axis_name(Axis a) {
  switch (a) {
    case Axis::t: return "t";
    case Axis::x1: return "x1";
    case Axis::x2: return "x2";
  }
  return "?";
}

DerivIndex::DerivIndex(std::initializer_list<Axis> axes) {
  for (Axis a : axes) ++counts_[static_cast<int>(a)];
}

DerivIndex DerivIndex::from_counts(int nt, int n1, int n2) {
  DerivIndex d;
  d.counts_ = {static_cast<std::uint8_t>(nt), static_cast<std::uint8_t>(n1),
               static_cast<std::uint8_t>(n2)};
  return d;
}

DerivIndex DerivIndex::with(Axis a) const {
  DerivIndex d = *this;
  ++d.counts_[static_cast<int>(a)];
  return d;
}

DerivIndex DerivIndex::plus(const DerivIndex& other) const {
  DerivIndex d = *this;
  for (int i = 0; i < 3; ++i) d.counts_[i] += other.counts_[i];
  return d;
}

DerivIndex DerivIndex::without(Axis a) const {
  DerivIndex d = *this;
  if (d.counts_[static_cast<int>(a)] == 0) throw std::logic_error("DerivIndex::without: axis absent");
  --d.counts_[static_cast<int>(a)];
  return d;
}

std::vector<Axis> DerivIndex::axes() const {
  std::vector<Axis> out;
  for (Axis a : kAxes)
    for (int n = 0; n < count(a); ++n) out.push_back(a);
  return out;
}

std::string DerivIndex::label() const {
  if (order() == 0) return "0";
  std::string s;
  for (Axis a : axes()) {
    if (!s.empty()) s += '.';
    s += axis_name(a);
  }
  return s;
}

std::strong_ordering operator<=>(const DerivIndex& a, const DerivIndex& b) {
  if (auto c = a.order() <=> b.order(); c != 0) return c;
  const auto xa = a.axes();
  const auto xb = b.axes();
  return std::lexicographical_compare_three_way(xa.begin(), xa.end(), xb.begin(), xb.end());
}

std::string FieldRef::label() const {
  if (d.order() == 0) return "u" + std::to_string(comp);
  return "d[" + d.label() + "]u" + std::to_string(comp);
}

// ---------------------------------------------------------------------------
// QuadForm

void QuadForm::add(const FactorPair& p, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(p, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

void QuadForm::add(const FieldRef& a, const FieldRef& b, const Rational& c) {
  add(FactorPair::make(a, b), c);
}

Rational QuadForm::coeff(const FieldRef& a, const FieldRef& b) const {
  auto it = terms_.find(FactorPair::make(a, b));
  return it == terms_.end() ? Rational(0) : it->second;
}

QuadForm& QuadForm::operator+=(const QuadForm& o) {
  for (const auto& [p, c] : o.terms_) add(p, c);
  return *this;
}

QuadForm& QuadForm::operator-=(const QuadForm& o) {
  for (const auto& [p, c] : o.terms_) add(p, Rational(-c));
  return *this;
}

QuadForm& QuadForm::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [p, v] : terms_) v *= c;
  return *this;
}

int QuadForm::max_order() const {
  int m = 0;
  for (const auto& [p, c] : terms_) m = std::max({m, p.first.d.order(), p.second.d.order()});
  return m;
}

QuadForm QuadForm::pair_part(int k, int l) const {
  if (k > l) std::swap(k, l);
  QuadForm out;
  for (const auto& [p, c] : terms_)
    if (p.first.comp == k && p.second.comp == l) out.add(p, c);
  return out;
}

std::string to_string(const QuadForm& f) {
  if (f.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, c] : f) {
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    first = false;
    Rational mag = abs(c);
    if (mag != 1) os << to_string(mag) << "*";
    os << p.first.label() << "*" << p.second.label();
  }
  return os.str();
}

QuadForm product(const FieldRef& a, const FieldRef& b, const Rational& c) {
  QuadForm f;
  f.add(a, b, c);
  return f;
}

QuadForm q0_form(const FieldRef& a, const FieldRef& b) {
  QuadForm f;
  for (Axis ax : kAxes) f.add(a.derive(ax), b.derive(ax), Rational(-eta(ax)));
  return f;
}

QuadForm qab_form(Axis a, Axis b, const FieldRef& f, const FieldRef& g) {
  QuadForm out;
  out.add(f.derive(a), g.derive(b), 1);
  out.add(f.derive(b), g.derive(a), -1);
  return out;
}

QuadForm g1_form(const FieldRef& v1, const FieldRef& w2, const MassPair& m) {
  return q0_form(v1, w2) + product(v1, w2, Rational(-2 * m.m1 * m.m1));
}

QuadForm g2_form(const FieldRef& v1, const FieldRef& w1, const MassPair& m) {
  return q0_form(v1, w1) + product(v1, w1, Rational(m.m1 * m.m1));
}

QuadForm h1_form(Axis a, const FieldRef& v1, const FieldRef& w2) {
  return product(v1, w2.derive(a)) + product(w2, v1.derive(a), 2);
}

QuadForm h2_form(Axis a, const FieldRef& v1, const FieldRef& w1) {
  return product(v1, w1.derive(a)) + product(w1, v1.derive(a), -1);
}

// ---------------------------------------------------------------------------
// QuadraticSystem

std::vector<std::pair<Monomial, Rational>> QuadraticSystem::terms() const {
  std::vector<std::pair<Monomial, Rational>> out;
  for (int j = 1; j <= 2; ++j)
    for (const auto& [p, c] : eq(j)) out.push_back({Monomial{j, p}, c});
  return out;
}

QuadraticSystem QuadraticSystem::scaled(const Rational& c) const {
  QuadraticSystem s = *this;
  for (auto& f : s.F) f *= c;
  return s;
}

namespace {

std::string term_text(int j, const FactorPair& p) {
  return "F" + std::to_string(j) + " <- " + p.first.label() + "*" + p.second.label();
}

bool is_tt(const FieldRef& f) { return f.d.order() == 2 && f.d.count(Axis::t) == 2; }

}  // namespace

ValidationReport validate(const QuadraticSystem& system) {
  ValidationReport rep;
  const auto& m = system.masses;
  if (sgn(m.m1) <= 0 || sgn(m.m2) <= 0) rep.violations.push_back("masses must be positive");
  else if (m.m1 > m.m2) rep.violations.push_back("masses must satisfy m1 <= m2");

  bool quasi_linear = true;
  for (int j = 1; j <= 2; ++j) {
    for (const auto& [p, c] : system.eq(j)) {
      const int oa = p.first.d.order();
      const int ob = p.second.d.order();
      if (p.first.comp < 1 || p.first.comp > 2 || p.second.comp < 1 || p.second.comp > 2)
        rep.violations.push_back(term_text(j, p) + ": component index out of range");
      if (oa > 2 || ob > 2 || oa + ob > 3) {
        quasi_linear = false;
        rep.violations.push_back(term_text(j, p) +
                                 ": quasi-linearity violated (second derivatives must enter linearly)");
      }
      if (is_tt(p.first) || is_tt(p.second))
        rep.violations.push_back(term_text(j, p) + ": gamma_00 != 0 (d_t d_t factor not allowed)");
    }
  }
  if (!quasi_linear) return rep;

  // gamma^{12}_{ab} = gamma^{21}_{ab}: F_1's coefficient on (Y)(d_a d_b u2) must
  // match F_2's coefficient on (Y)(d_a d_b u1) for every first-order-or-less Y.
  std::set<std::pair<FieldRef, DerivIndex>> keys;
  auto collect = [&](int j, int comp) {
    for (const auto& [p, c] : system.eq(j)) {
      for (const auto* x : {&p.first, &p.second}) {
        const FieldRef& y = x == &p.first ? p.second : p.first;
        if (x->comp == comp && x->d.order() == 2 && !is_tt(*x) && y.d.order() <= 1)
          keys.insert({y, x->d});
      }
    }
  };
  collect(1, 2);
  collect(2, 1);
  for (const auto& [y, ab] : keys) {
    const Rational c1 = system.eq(1).coeff(y, FieldRef{2, ab});
    const Rational c2 = system.eq(2).coeff(y, FieldRef{1, ab});
    if (c1 != c2) {
      std::ostringstream os;
      os << "symmetry gamma^{12}_{ab} = gamma^{21}_{ab} violated: coefficient of " << y.label() << "*"
         << FieldRef{2, ab}.label() << " in F1 is " << to_string(c1) << " but coefficient of "
         << y.label() << "*" << FieldRef{1, ab}.label() << " in F2 is " << to_string(c2);
      rep.violations.push_back(os.str());
    }
  }
  return rep;
}

InvalidSystem::InvalidSystem(ValidationReport r)
    : std::runtime_error([&] {
        std::string msg = "invalid system:";
        for (const auto& v : r.violations) msg += "\n  " + v;
        return msg;
      }()),
      report_(std::move(r)) {}

void require_valid(const QuadraticSystem& system) {
  auto rep = validate(system);
  if (!rep.ok()) throw InvalidSystem(std::move(rep));
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::pair<int, int> line_col(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

Rational parse_coeff(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected rational string \"p\" or \"p/q\"");
  std::optional<Rational> q;
  try {
    q = parse_rational(v.get<std::string>());
  } catch (const std::domain_error& e) {
    fail(where, e.what());
  }
  if (!q) fail(where, "malformed rational \"" + v.get<std::string>() + "\"");
  return *q;
}

DerivIndex parse_deriv(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected array of axis names");
  if (v.size() > 2) fail(where, "at most two derivative axes allowed");
  DerivIndex d;
  std::vector<Axis> seen;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& e = v[i];
    if (!e.is_string()) fail(where + "/" + std::to_string(i), "axis must be a string");
    const auto name = e.get<std::string>();
    Axis a;
    if (name == "t") a = Axis::t;
    else if (name == "x1") a = Axis::x1;
    else if (name == "x2") a = Axis::x2;
    else fail(where + "/" + std::to_string(i), "unknown axis \"" + name + "\"");
    if (!seen.empty() && a < seen.back()) fail(where, "axes must be sorted (t < x1 < x2)");
    seen.push_back(a);
    d = d.with(a);
  }
  return d;
}

int parse_index(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected integer 1 or 2");
  const auto i = v.get<long long>();
  if (i != 1 && i != 2) fail(where, "index must be 1 or 2");
  return static_cast<int>(i);
}

json deriv_json(const DerivIndex& d) {
  json a = json::array();
  for (Axis x : d.axes()) a.push_back(std::string(axis_name(x)));
  return a;
}

}  // namespace

QuadraticSystem parse_system(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                     e.what());
  }
  if (!doc.is_object()) fail("/", "top level must be an object");
  for (const auto& [k, v] : doc.items())
    if (k != "masses" && k != "terms") fail("/" + k, "unknown field");
  if (!doc.contains("masses")) fail("/masses", "missing");
  if (!doc.contains("terms")) fail("/terms", "missing");

  QuadraticSystem sys;
  const auto& masses = doc["masses"];
  if (!masses.is_array() || masses.size() != 2) fail("/masses", "expected array of 2 rational strings");
  sys.masses.m1 = parse_coeff(masses[0], "/masses/0");
  sys.masses.m2 = parse_coeff(masses[1], "/masses/1");

  const auto& terms = doc["terms"];
  if (!terms.is_array()) fail("/terms", "expected array");
  std::set<Monomial> seen;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string where = "/terms/" + std::to_string(i);
    const auto& t = terms[i];
    if (!t.is_object()) fail(where, "expected object");
    for (const auto& [k, v] : t.items())
      if (k != "eq" && k != "k" && k != "l" && k != "alpha" && k != "beta" && k != "coeff")
        fail(where + "/" + k, "unknown field");
    for (const char* req : {"eq", "k", "l", "alpha", "beta", "coeff"})
      if (!t.contains(req)) fail(where + "/" + req, "missing");
    const int eq = parse_index(t["eq"], where + "/eq");
    FieldRef a{parse_index(t["k"], where + "/k"), parse_deriv(t["alpha"], where + "/alpha")};
    FieldRef b{parse_index(t["l"], where + "/l"), parse_deriv(t["beta"], where + "/beta")};
    if (b < a) fail(where, "non-canonical monomial key: (k, alpha) must not exceed (l, beta)");
    Rational c = parse_coeff(t["coeff"], where + "/coeff");
    if (sgn(c) == 0) fail(where + "/coeff", "zero coefficients must be omitted");
    auto mono = Monomial::make(eq, a, b);
    if (!seen.insert(mono).second) fail(where, "duplicate monomial");
    sys.eq(eq).add(a, b, c);
  }
  return sys;
}

std::string serialize_system(const QuadraticSystem& system, int indent) {
  json doc;
  doc["masses"] = json::array({to_string(system.masses.m1), to_string(system.masses.m2)});
  json terms = json::array();
  for (const auto& [mono, c] : system.terms()) {
    json t;
    t["eq"] = mono.eq;
    t["k"] = mono.factors.first.comp;
    t["l"] = mono.factors.second.comp;
    t["alpha"] = deriv_json(mono.factors.first.d);
    t["beta"] = deriv_json(mono.factors.second.d);
    t["coeff"] = to_string(c);
    terms.push_back(std::move(t));
  }
  doc["terms"] = std::move(terms);
  return doc.dump(indent);
}

// ---------------------------------------------------------------------------
// Builtins

QuadraticSystem null_example(const NullExampleParams& params, const MassPair& masses) {
  QuadraticSystem s;
  s.masses = masses;
  constexpr std::array<Axis, 2> spatial{Axis::x1, Axis::x2};
  for (int i = 0; i < 2; ++i) {
    const Axis a = spatial[i];
    s.eq(1) += params.p[i] * g1_form(u(1), u(2).derive(a), masses);
    s.eq(2) += params.p[i] * g2_form(u(1), u(1).derive(a), masses);
    s.eq(1) += params.r[i] * g1_form(u(1).derive(a), u(2), masses);
  }
  for (int ia = 0; ia < 3; ++ia) {
    for (int ib = 0; ib < 3; ++ib) {
      if (ia + ib == 0) continue;
      const Axis a = kAxes[ia];
      const Axis b = kAxes[ib];
      s.eq(1) += params.q[ia][ib] * h1_form(a, u(1), u(2).derive(b));
      s.eq(2) += params.q[ia][ib] * h2_form(a, u(1), u(1).derive(b));
      s.eq(1) += params.s[ia][ib] * h1_form(a, u(1).derive(b), u(2));
    }
  }
  return s;
}

std::map<std::string, QuadraticSystem> builtin_systems() {
  std::map<std::string, QuadraticSystem> out;
  const MassPair m{1, 2};

  QuadraticSystem nonnull;
  nonnull.masses = m;
  nonnull.eq(1).add(u(1), u(2), 1);
  nonnull.eq(2).add(u(1), u(1), 1);
  out["nonnull_resonant"] = nonnull;

  out["null_example"] = null_example(NullExampleParams{}, m);

  QuadraticSystem strong;
  strong.masses = m;
  strong.eq(1) = qab_form(Axis::t, Axis::x1, u(1), u(2));
  out["strongnull_only"] = strong;

  QuadraticSystem semi;
  semi.masses = m;
  semi.eq(1) = g1_form(u(1), u(2), m);
  semi.eq(2) = g2_form(u(1), u(1), m);
  out["null_semilinear"] = semi;
  return out;
}

}  // namespace rkg
