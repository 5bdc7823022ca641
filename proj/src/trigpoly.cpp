#include "rkg/trigpoly.hpp"

#include <sstream>
#include <stdexcept>

namespace rkg {

using nlohmann::json;

// ---------------------------------------------------------------------------
// OmegaPoly

OmegaPoly OmegaPoly::constant(const GaussRat& c) { return monomial({0, 0, 0}, c); }

OmegaPoly OmegaPoly::monomial(const Exponents& e, const GaussRat& c) {
  OmegaPoly p;
  p.add_term(e, c);
  return p;
}

OmegaPoly OmegaPoly::var(int i) {
  Exponents e{0, 0, 0};
  e.at(i) = 1;
  return monomial(e);
}

void OmegaPoly::add_term(const Exponents& e, const GaussRat& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

GaussRat OmegaPoly::coeff(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? GaussRat() : it->second;
}

OmegaPoly& OmegaPoly::operator+=(const OmegaPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

OmegaPoly& OmegaPoly::operator-=(const OmegaPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

OmegaPoly& OmegaPoly::operator*=(const GaussRat& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

OmegaPoly operator*(const OmegaPoly& a, const OmegaPoly& b) {
  OmegaPoly out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_)
      out.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
  return out;
}

int OmegaPoly::degree_in(int var) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.at(var));
  return d;
}

GaussRat OmegaPoly::evaluate(const std::array<Rational, 3>& w) const {
  GaussRat sum;
  for (const auto& [e, c] : terms_) {
    Rational m = 1;
    for (int i = 0; i < 3; ++i)
      for (int n = 0; n < e[i]; ++n) m *= w[i];
    sum += c * GaussRat(m);
  }
  return sum;
}

std::complex<double> OmegaPoly::evaluate(const std::array<double, 3>& w) const {
  std::complex<double> sum{0.0, 0.0};
  for (const auto& [e, c] : terms_) {
    double m = 1.0;
    for (int i = 0; i < 3; ++i)
      for (int n = 0; n < e[i]; ++n) m *= w[i];
    sum += std::complex<double>(to_double(c.re), to_double(c.im)) * m;
  }
  return sum;
}

std::string to_string(const OmegaPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest total degree first reads more naturally.
  for (auto it = p.end(); it != p.begin();) {
    --it;
    const auto& [e, c] = *it;
    std::string mono;
    for (int i = 0; i < 3; ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "w" + std::to_string(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    const bool real_only = sgn(c.im) == 0;
    const bool imag_only = sgn(c.re) == 0;
    std::string coeff;
    bool negative = false;
    if (real_only) {
      negative = sgn(c.re) < 0;
      Rational mag = abs(c.re);
      coeff = (mag == 1 && !mono.empty()) ? "" : to_string(mag);
    } else if (imag_only) {
      negative = sgn(c.im) < 0;
      Rational mag = abs(c.im);
      coeff = mag == 1 ? "i" : to_string(mag) + "*i";
    } else {
      coeff = "(" + to_string(c) + ")";
    }
    if (first) os << (negative ? "-" : "");
    else os << (negative ? " - " : " + ");
    first = false;
    os << coeff;
    if (!coeff.empty() && !mono.empty()) os << "*";
    os << mono;
  }
  return os.str();
}

json to_json(const OmegaPoly& p) {
  json a = json::array();
  for (const auto& [e, c] : p) {
    a.push_back({{"exponents", {e[0], e[1], e[2]}}, {"re", to_string(c.re)}, {"im", to_string(c.im)}});
  }
  return a;
}

OmegaPoly omega_poly_from_json(const json& j) {
  OmegaPoly p;
  for (const auto& t : j) {
    const auto& ex = t.at("exponents");
    Exponents e{ex.at(0).get<int>(), ex.at(1).get<int>(), ex.at(2).get<int>()};
    auto re = parse_rational(t.at("re").get<std::string>());
    auto im = parse_rational(t.at("im").get<std::string>());
    if (!re || !im) throw std::invalid_argument("malformed OmegaPoly coefficient");
    p.add_term(e, GaussRat(*re, *im));
  }
  return p;
}

// ---------------------------------------------------------------------------
// ThetaSeries

void ThetaSeries::add(int freq, Parity par, const OmegaPoly& c) {
  if (freq < 0) throw std::invalid_argument("ThetaSeries: negative frequency");
  if (freq == 0 && par == Parity::sin) return;
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(Key{freq, par}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

OmegaPoly ThetaSeries::coeff(int freq, Parity par) const {
  auto it = terms_.find(Key{freq, par});
  return it == terms_.end() ? OmegaPoly() : it->second;
}

ThetaSeries& ThetaSeries::operator+=(const ThetaSeries& o) {
  for (const auto& [k, c] : o.terms_) add(k.first, k.second, c);
  return *this;
}

int ThetaSeries::max_frequency() const {
  int m = 0;
  for (const auto& [k, c] : terms_) m = std::max(m, k.first);
  return m;
}

namespace {

// A single substituted factor: coeff * trig(2 pi freq theta).
struct TrigFactor {
  OmegaPoly coeff;
  Parity parity;
  int freq;
};

// d^n/dphi^n cos(phi) = sign * (cos|sin)(phi) with the pattern cos, -sin, -cos, sin.
TrigFactor substitute_factor(const FieldRef& f, const MassPair& masses) {
  const int n = f.d.order();
  Rational scale = 1;
  for (int i = 0; i < n; ++i) scale *= masses.mass(f.comp);
  if (n % 4 == 1 || n % 4 == 2) scale = -scale;
  Exponents e{f.d.count(Axis::t), f.d.count(Axis::x1), f.d.count(Axis::x2)};
  return {OmegaPoly::monomial(e, GaussRat(scale)), n % 2 == 0 ? Parity::cos : Parity::sin, f.comp};
}

// Product-to-sum for trig(A) * trig(B), A = 2 pi k1 theta, B = 2 pi k2 theta.
void accumulate_product(ThetaSeries& out, const TrigFactor& a, const TrigFactor& b, const Rational& c) {
  OmegaPoly half = GaussRat(Rational(c / 2)) * (a.coeff * b.coeff);
  const int sum = a.freq + b.freq;
  int diff = a.freq - b.freq;
  // sin(A - B) flips sign when the difference is negative.
  Rational diff_sign = 1;
  if (diff < 0) {
    diff = -diff;
    diff_sign = -1;
  }
  const OmegaPoly neg_half = GaussRat(Rational(-1)) * half;
  if (a.parity == Parity::cos && b.parity == Parity::cos) {
    out.add(diff, Parity::cos, half);
    out.add(sum, Parity::cos, half);
  } else if (a.parity == Parity::sin && b.parity == Parity::sin) {
    out.add(diff, Parity::cos, half);
    out.add(sum, Parity::cos, neg_half);
  } else if (a.parity == Parity::sin) {  // sin A cos B
    out.add(sum, Parity::sin, half);
    out.add(diff, Parity::sin, GaussRat(diff_sign) * half);
  } else {  // cos A sin B
    out.add(sum, Parity::sin, half);
    out.add(diff, Parity::sin, GaussRat(Rational(-diff_sign)) * half);
  }
}

}  // namespace

ThetaSeries substitute(const QuadForm& form, const MassPair& masses) {
  ThetaSeries out;
  for (const auto& [p, c] : form) {
    accumulate_product(out, substitute_factor(p.first, masses), substitute_factor(p.second, masses), c);
  }
  return out;
}

ThetaSeries substitute(const QuadraticSystem& system, int eq) {
  ThetaSeries s = substitute(system.eq(eq), system.masses);
  if (s.max_frequency() > kMaxThetaFrequency)
    throw std::logic_error("substitute: theta frequency " + std::to_string(s.max_frequency()) +
                           " exceeds bound " + std::to_string(kMaxThetaFrequency));
  return s;
}

OmegaPoly fourier_pick(const ThetaSeries& series, int j) {
  if (j < 1) throw std::invalid_argument("fourier_pick: j must be >= 1");
  OmegaPoly out = GaussRat(Rational(1, 2)) * series.coeff(j, Parity::cos);
  out += GaussRat(Rational(0), Rational(-1, 2)) * series.coeff(j, Parity::sin);
  return out;
}

OmegaPoly reduce_hyperboloid(const OmegaPoly& p) {
  OmegaPoly out;
  for (const auto& [e, c] : p) {
    const int q = e[0] / 2;
    const int r = e[0] % 2;
    if (q == 0) {
      out.add_term(e, c);
      continue;
    }
    // w0^(2q) = (1 + w1^2 + w2^2)^q, expanded with multinomial coefficients.
    mpz_class qf;
    mpz_fac_ui(qf.get_mpz_t(), q);
    for (int b = 0; b <= q; ++b) {
      for (int d = 0; b + d <= q; ++d) {
        const int a = q - b - d;
        mpz_class fa, fb, fd;
        mpz_fac_ui(fa.get_mpz_t(), a);
        mpz_fac_ui(fb.get_mpz_t(), b);
        mpz_fac_ui(fd.get_mpz_t(), d);
        mpz_class multinom = qf / (fa * fb * fd);
        out.add_term({r, e[1] + 2 * b, e[2] + 2 * d}, c * GaussRat(Rational(multinom)));
      }
    }
  }
  return out;
}

}  // namespace rkg
