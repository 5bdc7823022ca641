#include "rkg/model.hpp"

#include "../support/random_systems.hpp"

#include <doctest.h>

using namespace rkg;

namespace {

bool mentions(const ValidationReport& r, const std::string& needle) {
  for (const auto& v : r.violations)
    if (v.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("rational parsing is exact") {
  CHECK(*parse_rational("1/3") == Rational(1, 3));
  CHECK(*parse_rational("-4/6") == Rational(-2, 3));
  CHECK(*parse_rational("7") == Rational(7));
  CHECK_FALSE(parse_rational("0.5").has_value());
  CHECK_FALSE(parse_rational("1/").has_value());
  CHECK_FALSE(parse_rational("").has_value());
  CHECK_THROWS_AS(parse_rational("1/0"), std::domain_error);
  CHECK(to_string(Rational(6, 4)) == "3/2");
  CHECK(to_string(Rational(-5)) == "-5");
}

TEST_CASE("derivative indices are canonical") {
  CHECK(DerivIndex{Axis::x2, Axis::t} == DerivIndex{Axis::t, Axis::x2});
  CHECK(DerivIndex{Axis::x1, Axis::t}.label() == "t.x1");
  CHECK(DerivIndex{}.label() == "0");
  CHECK(DerivIndex{} < DerivIndex{Axis::x2});
  CHECK(DerivIndex{Axis::x2} < DerivIndex{Axis::t, Axis::t});
  CHECK(du(2, {Axis::x1}).label() == "d[x1]u2");
}

TEST_CASE("monomial keys ignore factor order") {
  CHECK(FactorPair::make(u(2), du(1, {Axis::t})) == FactorPair::make(du(1, {Axis::t}), u(2)));
  CHECK(Monomial::make(1, u(2), u(1)) == Monomial::make(1, u(1), u(2)));
  QuadForm a, b;
  a.add(u(2), du(1, {Axis::x1}), 3);
  b.add(du(1, {Axis::x1}), u(2), 3);
  CHECK(a == b);
}

TEST_CASE("validate") {
  QuadraticSystem s;
  s.eq(1).add(u(1), u(2), 1);
  CHECK(validate(s).ok());

  SUBCASE("gamma_00") {
    QuadraticSystem bad;
    bad.eq(1).add(u(2), du(1, {Axis::t, Axis::t}), 1);
    auto r = validate(bad);
    CHECK_FALSE(r.ok());
    CHECK(mentions(r, "gamma_00"));
  }
  SUBCASE("symmetry partner missing") {
    QuadraticSystem bad;
    bad.eq(1).add(u(1), du(2, {Axis::x1, Axis::x2}), 1);
    auto r = validate(bad);
    CHECK(mentions(r, "symmetry"));
    bad.eq(2).add(u(1), du(1, {Axis::x1, Axis::x2}), 1);
    CHECK(validate(bad).ok());
    bad.eq(2).add(u(1), du(1, {Axis::x1, Axis::x2}), 1);
    CHECK(mentions(validate(bad), "symmetry"));
  }
  SUBCASE("quasi-linearity") {
    QuadraticSystem bad;
    bad.eq(1).add(du(1, {Axis::x1, Axis::x1}), du(2, {Axis::x2, Axis::x2}), 1);
    CHECK_FALSE(validate(bad).ok());
    QuadraticSystem third;
    third.eq(2).add(u(1), du(2, {Axis::x1, Axis::x1, Axis::x2}), 1);
    CHECK_FALSE(validate(third).ok());
  }
  SUBCASE("masses") {
    QuadraticSystem bad = s;
    bad.masses = {Rational(3), Rational(2)};
    CHECK(mentions(validate(bad), "m1 <= m2"));
    bad.masses = {Rational(0), Rational(2)};
    CHECK(mentions(validate(bad), "positive"));
  }
  SUBCASE("several violations are all reported") {
    QuadraticSystem bad;
    bad.masses = {Rational(-1), Rational(2)};
    bad.eq(1).add(u(2), du(1, {Axis::t, Axis::t}), 1);
    CHECK(validate(bad).violations.size() >= 2);
  }
}

TEST_CASE("parse_system") {
  auto s = parse_system(R"({"masses":["1","2"],"terms":[{"eq":1,"k":1,"l":2,"alpha":[],"beta":[],"coeff":"1"}]})");
  CHECK(s.masses == MassPair{});
  CHECK(s.eq(1).coeff(u(1), u(2)) == 1);
  CHECK(s.eq(2).empty());

  auto third = parse_system(R"({"masses":["1","2"],"terms":[{"eq":2,"k":1,"l":1,"alpha":[],"beta":[],"coeff":"1/3"}]})");
  CHECK(third.eq(2).coeff(u(1), u(1)) == Rational(1, 3));

  auto msg = [](const char* text) {
    try {
      parse_system(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(msg(R"({"masses":["1","2"],"terms":[{"eq":1,"k":1,"l":2,"alpha":[],"beta":[],"coeff":"1/0"}]})")
            .find("zero denominator") != std::string::npos);
  CHECK(msg("{\"masses\":[\"1\",\n\"2\"") .find("line 2") != std::string::npos);
  CHECK(msg(R"({"masses":["1","2"],"terms":[{"eq":1,"k":2,"l":1,"alpha":[],"beta":[],"coeff":"1"}]})")
            .find("non-canonical") != std::string::npos);
  CHECK(msg(R"({"masses":["1","2"],"terms":[],"extra":1})").find("unknown field") != std::string::npos);
  CHECK(msg(R"({"masses":["1","2"],"terms":[{"eq":1,"k":1,"l":2,"alpha":["x2","t"],"beta":[],"coeff":"1"}]})")
            .find("sorted") != std::string::npos);
  CHECK(msg(R"({"masses":["1","2"],"terms":[{"eq":1,"k":1,"l":2,"alpha":["y"],"beta":[],"coeff":"1"}]})")
            .find("/terms/0/alpha/0") != std::string::npos);
  CHECK(msg(R"({"masses":["1","2"],"terms":[{"eq":3,"k":1,"l":2,"alpha":[],"beta":[],"coeff":"1"}]})")
            .find("/terms/0/eq") != std::string::npos);
  CHECK(msg(R"({"masses":["1","2"],"terms":[{"eq":1,"k":1,"l":2,"alpha":[],"beta":[],"coeff":"0"}]})") != "");
  CHECK(msg(R"({"masses":["1","2"],"terms":[{"eq":1,"k":1,"l":2,"alpha":[],"beta":[],"coeff":0.5}]})") != "");
}

TEST_CASE("serialize_system") {
  QuadraticSystem empty;
  CHECK(serialize_system(empty) == R"({"masses":["1","2"],"terms":[]})");

  QuadraticSystem s;
  s.eq(1).add(u(2), u(1), 1);
  CHECK(serialize_system(s) ==
        R"({"masses":["1","2"],"terms":[{"alpha":[],"beta":[],"coeff":"1","eq":1,"k":1,"l":2}]})");

  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    QuadraticSystem r = i % 2 ? testing::random_perturbed_system(rng) : testing::random_null_system(rng);
    Rational m1(i + 1, 3);
    m1.canonicalize();
    r.masses = {m1, Rational(2 * m1)};
    REQUIRE(validate(r).ok());
    CHECK(parse_system(serialize_system(r)) == r);
    CHECK(parse_system(serialize_system(r, 2)) == r);
  }
}

TEST_CASE("builtin systems") {
  const auto b = builtin_systems();
  for (const auto& [name, s] : b) {
    INFO(name);
    CHECK(validate(s).ok());
  }

  const auto& nn = b.at("nonnull_resonant");
  CHECK(nn.terms().size() == 2);
  CHECK(nn.eq(1).coeff(u(1), u(2)) == 1);
  CHECK(nn.eq(2).coeff(u(1), u(1)) == 1);

  const auto& sn = b.at("strongnull_only");
  QuadForm expect;
  expect.add(du(1, {Axis::t}), du(2, {Axis::x1}), 1);
  expect.add(du(1, {Axis::x1}), du(2, {Axis::t}), -1);
  CHECK(sn.eq(1) == expect);
  CHECK(sn.eq(2).empty());

  // Default family member: G1(u1, d1 u2) + G2(u1, d1 u1), expanded by hand with m1 = 1.
  const auto& ne = b.at("null_example");
  QuadForm f1, f2;
  f1.add(du(1, {Axis::t}), du(2, {Axis::t, Axis::x1}), 1);
  f1.add(du(1, {Axis::x1}), du(2, {Axis::x1, Axis::x1}), -1);
  f1.add(du(1, {Axis::x2}), du(2, {Axis::x1, Axis::x2}), -1);
  f1.add(u(1), du(2, {Axis::x1}), -2);
  f2.add(du(1, {Axis::t}), du(1, {Axis::t, Axis::x1}), 1);
  f2.add(du(1, {Axis::x1}), du(1, {Axis::x1, Axis::x1}), -1);
  f2.add(du(1, {Axis::x2}), du(1, {Axis::x1, Axis::x2}), -1);
  f2.add(u(1), du(1, {Axis::x1}), 1);
  CHECK(ne.eq(1) == f1);
  CHECK(ne.eq(2) == f2);
}

TEST_CASE("generator forms") {
  const MassPair m{Rational(3), Rational(6)};
  QuadForm h1;
  h1.add(u(1), du(2, {Axis::x2}), 1);
  h1.add(u(2), du(1, {Axis::x2}), 2);
  CHECK(h1_form(Axis::x2, u(1), u(2)) == h1);
  QuadForm h2;
  h2.add(u(1), du(1, {Axis::t, Axis::x1}), 1);
  h2.add(du(1, {Axis::x1}), du(1, {Axis::t}), -1);
  CHECK(h2_form(Axis::t, u(1), du(1, {Axis::x1})) == h2);
  CHECK(g1_form(u(1), u(2), m).coeff(u(1), u(2)) == -18);
  CHECK(g2_form(u(1), u(1), m).coeff(u(1), u(1)) == 9);
  CHECK(qab_form(Axis::x1, Axis::x2, u(1), u(1)).empty());
}
