#include "rkg/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace rkg {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  std::string_view num = body;
  std::string_view den = "1";
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    num = body.substr(0, slash);
    den = body.substr(slash + 1);
  }
  if (!all_digits(num) || !all_digits(den)) return std::nullopt;

  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw std::domain_error("zero denominator in rational \"" + std::string(text) + "\"");
  if (negative) n = -n;
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& value) {
  Rational q = value;
  q.canonicalize();
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

std::string to_string(const GaussRat& z) {
  const bool has_re = sgn(z.re) != 0;
  const bool has_im = sgn(z.im) != 0;
  if (!has_im) return to_string(z.re);
  std::string im_part;
  if (z.im == 1)
    im_part = "i";
  else if (z.im == -1)
    im_part = "-i";
  else
    im_part = to_string(z.im) + "*i";
  if (!has_re) return im_part;
  if (sgn(z.im) < 0) {
    Rational mag = -z.im;
    return to_string(z.re) + " - " + (mag == 1 ? std::string("i") : to_string(mag) + "*i");
  }
  return to_string(z.re) + " + " + im_part;
}

std::ostream& operator<<(std::ostream& os, const GaussRat& z) { return os << to_string(z); }

}  // namespace rkg
