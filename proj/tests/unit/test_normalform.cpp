#include "rkg/normalform.hpp"
#include "rkg/nullcheck.hpp"

#include "../support/random_systems.hpp"

#include <doctest.h>

using namespace rkg;

namespace {

Mat2 mat(int a, int b, int c, int d) { return {{{Rational(a), Rational(b)}, {Rational(c), Rational(d)}}}; }

// Independent oracle: all 4 signed sums, each computed from scratch.
Rational det_oracle(const Rational& mj, const Rational& mk, const Rational& ml) {
  Rational d = 1;
  d *= mj + mk + ml;
  d *= mj + mk - ml;
  d *= mj - mk + ml;
  d *= mj - mk - ml;
  return d;
}

}  // namespace

TEST_CASE("resonance matrices at m = (1, 2)") {
  const MassPair m;
  auto a111 = resonance_matrix(1, 1, 1, m);
  CHECK(a111.entries == mat(-1, 2, 2, -1));
  CHECK(a111.det == -3);
  REQUIRE(a111.p.has_value());
  CHECK((*a111.p)[0] == Rational(1, 3));
  CHECK((*a111.p)[1] == Rational(2, 3));

  auto a112 = resonance_matrix(1, 1, 2, m);
  CHECK(a112.entries == mat(-4, 8, 2, -4));
  CHECK(a112.det == 0);
  CHECK_FALSE(a112.invertible);
  CHECK_FALSE(a112.p.has_value());

  auto a211 = resonance_matrix(2, 1, 1, m);
  CHECK(a211.entries == mat(2, 2, 2, 2));
  CHECK_FALSE(a211.invertible);
}

TEST_CASE("classify_resonance") {
  auto degenerate = [](const MassPair& m) {
    std::vector<std::array<int, 3>> out;
    for (const auto& r : classify_resonance(m))
      if (!r.invertible) out.push_back({r.j, r.k, r.l});
    return out;
  };
  using V = std::vector<std::array<int, 3>>;
  CHECK(classify_resonance(MassPair{}).size() == 6);
  CHECK(degenerate(MassPair{}) == V{{1, 1, 2}, {2, 1, 1}});
  CHECK(degenerate({Rational(1), Rational(3)}).empty());
  CHECK(degenerate({Rational(1), Rational(1)}).empty());
  CHECK(degenerate({Rational(5, 7), Rational(10, 7)}) == V{{1, 1, 2}, {2, 1, 1}});
}

TEST_CASE("determinant and inverse over random masses") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> num(1, 40), den(1, 12);
  for (int n = 0; n < 1000; ++n) {
    Rational m1(num(rng), den(rng)), m2(num(rng), den(rng));
    m1.canonicalize();
    m2.canonicalize();
    if (m1 > m2) std::swap(m1, m2);
    const MassPair m{m1, m2};
    for (const auto& r : classify_resonance(m)) {
      const auto& e = r.entries;
      CHECK(r.det == e[0][0] * e[1][1] - e[0][1] * e[1][0]);
      CHECK(r.det == det_oracle(m.mass(r.j), m.mass(r.k), m.mass(r.l)));
      if (r.invertible) {
        const auto& p = *r.p;
        CHECK(e[0][0] * p[0] + e[0][1] * p[1] == 1);
        CHECK(e[1][0] * p[0] + e[1][1] * p[1] == 0);
      }
    }
  }
}

TEST_CASE("degenerate_images") {
  auto img = degenerate_images(MassPair{});
  CHECK(img.a112 == Vec2{Rational(-2), Rational(1)});
  CHECK(img.a211 == Vec2{Rational(1), Rational(1)});
  auto img3 = degenerate_images({Rational(3), Rational(6)});
  CHECK(img3.a112 == Vec2{Rational(-18), Rational(1)});
  CHECK(img3.a211 == Vec2{Rational(9), Rational(1)});
  CHECK_THROWS_AS(degenerate_images({Rational(1), Rational(3)}), std::invalid_argument);

  // A_112 x lies on the image line for both unit vectors.
  const auto a = resonance_matrix(1, 1, 2, MassPair{}).entries;
  for (int c = 0; c < 2; ++c) CHECK(a[0][c] * img.a112[1] - a[1][c] * img.a112[0] == 0);
}

TEST_CASE("decompose G1(u1, u2)") {
  QuadraticSystem s;
  s.eq(1) = g1_form(u(1), u(2), s.masses);
  auto d = decompose(s);
  CHECK(d.coefficients == std::map<std::string, Rational>{{"G1[0,0]", Rational(1)}});
  CHECK(d.lambda[0] == product(u(1), u(2), Rational(1, 2)));
  CHECK(d.lambda[1].empty());
  CHECK(d.strongnull_remainder[0].empty());
  auto j = decomposition_json(d);
  CHECK(j["generators"]["G1[0,0]"] == "1");
  CHECK(j["residual"].is_null());
}

TEST_CASE("decompose H2_t(u1, d1 u1)") {
  QuadraticSystem s;
  s.masses = {Rational(3), Rational(6)};
  s.eq(2) = h2_form(Axis::t, u(1), du(1, {Axis::x1}));
  // The partner of the d_t d_1 u1 factor in F1 keeps the system symmetric.
  s.eq(1) = h1_form(Axis::t, u(1), du(2, {Axis::x1}));
  auto d = decompose(s);
  CHECK(d.coefficients.at("H2_t[0,x1]") == 1);
  CHECK(d.lambda[1] == product(u(1), du(1, {Axis::t, Axis::x1}), Rational(1, 18)));
  CHECK(d.lambda[0] == product(u(1), du(2, {Axis::t, Axis::x1}), Rational(-1, 36)));
}

TEST_CASE("nonnull_resonant is rejected with a residual") {
  try {
    decompose(builtin_systems().at("nonnull_resonant"));
    FAIL("expected NotNullError");
  } catch (const NotNullError& e) {
    CHECK_FALSE(e.residual()[0].empty());
    CHECK_FALSE(e.residual()[1].empty());
  }
}

TEST_CASE("decompose preconditions") {
  QuadraticSystem s = builtin_systems().at("null_semilinear");
  s.masses = {Rational(1), Rational(3)};
  CHECK_THROWS_AS(decompose(s), std::invalid_argument);
}

TEST_CASE("null_example echoes its constants") {
  auto d = decompose(builtin_systems().at("null_example"));
  CHECK(d.coefficients == std::map<std::string, Rational>{{"G1[0,x1]", 1}, {"G2[0,x1]", 1}});

  NullExampleParams p;
  p.p = {Rational(2, 5), Rational(-3)};
  p.q[1][2] = Rational(7, 4);
  auto e = decompose(null_example(p));
  CHECK(e.coefficients.at("G1[0,x1]") == Rational(2, 5));
  CHECK(e.coefficients.at("G1[0,x2]") == -3);
  CHECK(e.coefficients.at("G2[0,x1]") == Rational(2, 5));
  CHECK(e.coefficients.at("G2[0,x2]") == -3);
  CHECK(e.coefficients.at("H1_x1[0,x2]") == Rational(7, 4));
  CHECK(e.coefficients.at("H2_x1[0,x2]") == Rational(7, 4));
}

TEST_CASE("self-interaction terms go through invertible matrices") {
  QuadraticSystem s;
  s.eq(1).add(u(1), u(1), 1);
  auto d = decompose(s);
  CHECK(d.free_terms[0] == product(u(1), u(1)));
  QuadForm want = product(u(1), u(1), Rational(1, 3));
  want += Rational(2, 3) * q0_form(u(1), u(1));
  CHECK(d.lambda[0] == want);
  // What remains after the normal form is a strong null combination.
  QuadForm rest = s.eq(1) - klein_gordon_quadratic(d.lambda[0], 1, s.masses);
  CHECK(reduce_on_shell(rest - expand(d.strongnull_remainder[0]), s.masses).empty());
}

TEST_CASE("reconstruct") {
  const auto basis = generator_basis(MassPair{});
  Decomposition zero;
  auto r = reconstruct(zero, basis);
  CHECK(r[0].empty());
  CHECK(r[1].empty());

  std::mt19937_64 rng(23);
  for (int i = 0; i < 60; ++i) {
    auto s = testing::random_null_system(rng);
    REQUIRE(validate(s).ok());
    auto d = decompose(s, basis);
    auto back = reconstruct(d, basis);
    CHECK(back[0] == s.eq(1).pair_part(1, 2));
    CHECK(back[1] == s.eq(2).pair_part(1, 1));
  }
}

TEST_CASE("decompose agrees with check_null") {
  std::mt19937_64 rng(29);
  const auto basis = generator_basis(MassPair{});
  int nonnull = 0;
  for (int i = 0; i < 80; ++i) {
    auto s = i % 2 ? testing::random_perturbed_system(rng) : testing::random_null_system(rng);
    const bool is_null = check_null(s).is_null;
    bool feasible = true;
    try {
      decompose(s, basis);
    } catch (const NotNullError&) {
      feasible = false;
    }
    CHECK(is_null == feasible);
    nonnull += !is_null;
  }
  CHECK(nonnull > 20);
}

TEST_CASE("Lambda and the strong null remainder") {
  std::mt19937_64 rng(31);
  const auto basis = generator_basis(MassPair{});
  for (int i = 0; i < 30; ++i) {
    auto s = testing::random_null_system(rng);
    auto d = decompose(s, basis);
    for (int j = 1; j <= 2; ++j) {
      CHECK(d.lambda[j - 1].max_order() <= 3);
      QuadForm rest = s.eq(j) - klein_gordon_quadratic(d.lambda[j - 1], j, s.masses) -
                      expand(d.strongnull_remainder[j - 1]);
      CHECK(reduce_on_shell(rest, s.masses).empty());
    }
  }
}

TEST_CASE("reduce_on_shell") {
  const MassPair m;
  QuadForm f = product(du(2, {Axis::t, Axis::t}), u(1));
  QuadForm want;
  want.add(du(2, {Axis::x1, Axis::x1}), u(1), 1);
  want.add(du(2, {Axis::x2, Axis::x2}), u(1), 1);
  want.add(u(2), u(1), -4);
  CHECK(reduce_on_shell(f, m) == want);
  // d_t^3 keeps one d_t.
  auto g = reduce_on_shell(product(du(1, {Axis::t, Axis::t, Axis::t}), u(2)), m);
  for (const auto& [p, c] : g) CHECK(p.first.d.count(Axis::t) + p.second.d.count(Axis::t) <= 1);
}

TEST_CASE("generator basis enumeration") {
  const auto basis = generator_basis(MassPair{});
  CHECK(basis.f1.size() == 7 + 48 + 21);
  CHECK(basis.f2.size() == 4 + 9 + 9);
  CHECK(basis.find("G1[0,0]") != nullptr);
  CHECK(basis.find("Q11_t_x1[0,x2]") != nullptr);
  CHECK(basis.find("nope") == nullptr);
}
