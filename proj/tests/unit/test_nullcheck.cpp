#include "rkg/normalform.hpp"
#include "rkg/nullcheck.hpp"

#include "../support/random_systems.hpp"

#include <doctest.h>

using namespace rkg;

TEST_CASE("nonnull_resonant has Phi_1 = Phi_2 = 1/4") {
  auto v = check_null(builtin_systems().at("nonnull_resonant"));
  CHECK_FALSE(v.is_null);
  CHECK(v.resonant);
  const auto quarter = OmegaPoly::constant(GaussRat(Rational(1, 4)));
  CHECK(v.phi[0] == quarter);
  CHECK(v.phi[1] == quarter);

  auto wit = find_witness(v);
  REQUIRE(wit.has_value());
  CHECK(wit->j == 1);
  CHECK(wit->value == GaussRat(Rational(1, 4)));

  const std::string report = certificate_report(v);
  CHECK(report.find("Phi_1 = 1/4") != std::string::npos);
  CHECK(report.find("Phi_2 = 1/4") != std::string::npos);
  CHECK(report.find("VIOLATED") != std::string::npos);
  CHECK(report.find("witness: Phi_1(1, 0, 0) = 1/4") != std::string::npos);

  auto j = verdict_json(v);
  CHECK(j["is_null"] == false);
  CHECK(j["phi1_text"] == "1/4");
  CHECK(j.contains("witness"));
}

TEST_CASE("G1(u1, u2) is null") {
  QuadraticSystem s;
  s.eq(1) = g1_form(u(1), u(2), s.masses);
  auto v = check_null(s);
  CHECK(v.is_null);
  // Before reduction Phi_1 is the hyperboloid factor times 1/2, minus 1/2.
  CHECK_FALSE(v.phi_unreduced[0].is_zero());
  CHECK(certificate_report(v).find("SATISFIED") != std::string::npos);
  CHECK_FALSE(verdict_json(v).contains("witness"));
}

TEST_CASE("strong null only is null before reduction") {
  auto v = check_null(builtin_systems().at("strongnull_only"));
  CHECK(v.is_null);
  CHECK(v.phi_unreduced[0].is_zero());
  CHECK(v.phi_unreduced[1].is_zero());
}

TEST_CASE("the two-parameter family is null for random constants") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    NullExampleParams p;
    for (auto& x : p.p) x = testing::random_rational(rng);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a + b > 0) p.q[a][b] = testing::random_rational(rng);
    CHECK(check_null(null_example(p)).is_null);
  }
}

TEST_CASE("each generator alone is null") {
  const MassPair m{Rational(2, 3), Rational(4, 3)};
  const auto basis = generator_basis(m);
  for (int j = 1; j <= 2; ++j)
    for (const auto& g : basis.for_eq(j)) {
      INFO(g.name);
      QuadraticSystem s;
      s.masses = m;
      s.eq(j) = g.expansion;
      CHECK(evaluate_null(s).is_null);
    }
}

TEST_CASE("non-resonant masses are annotated") {
  QuadraticSystem s = builtin_systems().at("nonnull_resonant");
  s.masses = {Rational(1), Rational(3)};
  auto v = check_null(s);
  CHECK_FALSE(v.resonant);
  CHECK(certificate_report(v).find("non-resonant") != std::string::npos);
}

TEST_CASE("invalid input is rejected") {
  QuadraticSystem bad;
  bad.eq(1).add(u(2), du(1, {Axis::t, Axis::t}), 1);
  CHECK_THROWS_AS(check_null(bad), InvalidSystem);
}

TEST_CASE("witness on an off-apex point") {
  // Phi_1 proportional to w1 vanishes at the apex.
  QuadraticSystem s;
  s.eq(1).add(u(1), du(2, {Axis::x1}), 1);
  auto v = check_null(s);
  REQUIRE_FALSE(v.is_null);
  auto wit = find_witness(v);
  REQUIRE(wit.has_value());
  const auto& om = wit->omega;
  CHECK(om[0] * om[0] - om[1] * om[1] - om[2] * om[2] == 1);
  CHECK(sgn(om[0]) > 0);
  CHECK_FALSE(wit->value.is_zero());
}
