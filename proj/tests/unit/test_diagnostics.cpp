#include "rkg/diagnostics.hpp"

#include "../support/manufactured.hpp"

#include <doctest.h>

using namespace rkg;
using rkg::testing::max_abs;

namespace {

DiagnosticsRow row(double t, double e) {
  DiagnosticsRow r;
  r.time = t;
  r.energy = e;
  return r;
}

}  // namespace

TEST_CASE("energy norm") {
  const Grid g = Grid::make(32, 10);
  Fft fft(g);
  const MassPair m;
  CHECK(energy_norm(fft, zero_state(g), m) == 0);

  GridState s = zero_state(g);
  std::fill(s.u[0].begin(), s.u[0].end(), 0.3);
  // sqrt(1/2 m1^2 c^2 A)
  CHECK(energy_norm(fft, s, m) == doctest::Approx(std::sqrt(0.5 * 0.09 * 100)).epsilon(1e-14));

  InitialData id;
  id.epsilon = 0.7;
  id.sigma = 1.5;
  id.weights = {1, -0.5};
  id.velocity_weights = {0.2, 0.8};
  s = initial_state(g, id);
  const double a = energy_norm(fft, s, m), b = energy_norm_spectral(fft, s, m);
  CHECK(std::abs(a - b) < 1e-12 * a);
}

TEST_CASE("Sobolev norms") {
  const Grid g = Grid::make(32, 2 * M_PI);
  Fft fft(g);
  const double amp = 0.8;
  // amp cos(3 x1) has L^2 norm amp * pi * sqrt(2) on [0, 2 pi)^2.
  Field f(g.points());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) f[i * g.n + j] = amp * std::cos(3 * g.x(i));
  const double l2 = amp * M_PI * std::sqrt(2.0);
  CHECK(sobolev_norm(fft, f, 0) == doctest::Approx(l2).epsilon(1e-13));
  CHECK(sobolev_norm(fft, f, 2) == doctest::Approx(10 * l2).epsilon(1e-13));

  InitialData id;
  id.sigma = 0.6;
  id.velocity_weights = {1, 1};
  const GridState s = initial_state(g, id);
  double quad = 0;
  for (double v : s.u[0]) quad += v * v;
  CHECK(sobolev_norm(fft, s.u[0], 0) == doctest::Approx(std::sqrt(quad) * g.dx()).epsilon(1e-12));
  for (int k = 0; k < 4; ++k) CHECK(sobolev_norm(fft, s, k) <= sobolev_norm(fft, s, k + 1));
}

TEST_CASE("weighted sup norm") {
  const Grid g = Grid::make(16, 16);
  GridState s = zero_state(g);
  CHECK(sup_weighted(g, s) == std::array<double, 2>{0, 0});
  s.time = 2;
  s.u[1][3 * g.n + 12] = -0.5;  // x = (-5, 4)
  const auto w = sup_weighted(g, s);
  CHECK(w[0] == 0);
  CHECK(w[1] == doctest::Approx(0.5 * std::sqrt(1 + std::pow(2 + std::sqrt(41.0), 2))));
  CHECK(weighted_moment(g, s, 0) == doctest::Approx(0.25));
  CHECK(weighted_moment(g, s, 1) == doctest::Approx(0.25 * 42));
}

TEST_CASE("decay fits") {
  std::vector<std::pair<double, double>> inv, flat, few;
  for (double t = 1; t <= 64; t *= 1.5) {
    inv.emplace_back(t, 3 / t);
    flat.emplace_back(t, 0.2);
  }
  const DecayFit f = decay_profile(inv, 0, 100);
  CHECK(f.slope == doctest::Approx(-1).epsilon(1e-6));
  CHECK(std::exp(f.intercept) == doctest::Approx(3).epsilon(1e-9));
  CHECK(std::abs(decay_profile(flat, 0, 100).slope) < 1e-12);
  CHECK(decay_profile(inv, 5, 30).points < f.points);
  few = {{1, 1}, {2, 0.5}};
  CHECK_THROWS_AS(decay_profile(few, 0, 10), InsufficientData);
  CHECK_THROWS_AS(decay_profile(inv, 200, 300), InsufficientData);
}

TEST_CASE("free profiles") {
  const Grid g = Grid::make(32, 20);
  Fft fft(g);
  const MassPair m;
  InitialData id;
  id.velocity_weights = {0.5, 0.1};
  const GridState s0 = initial_state(g, id);

  const ProfileRecord at0 = extract_profile(fft, s0, m);
  for (int k = 0; k < 2; ++k) {
    for (std::size_t i = 0; i < s0.u[k].size(); ++i) {
      CHECK(std::abs(at0.fplus[k][i] - s0.u[k][i]) < 1e-15);
      CHECK(std::abs(at0.gplus[k][i] - s0.ut[k][i]) < 1e-15);
    }
  }
  CHECK(std::isnan(at0.cauchy_gap));

  // Free data: every extraction returns the initial data.
  SimConfig c;
  c.grid = g;
  c.system.masses = m;
  c.data = id;
  c.t_end = 20;
  c.diag_every = 25;
  DiagnosticsRecorder rec(g, m, {0, 1}, doubling_times(2.5, 20), 0.05);
  run(c, std::ref(rec));
  REQUIRE(rec.profiles().size() == 4);
  for (const auto& p : rec.profiles()) {
    if (!std::isnan(p.cauchy_gap)) CHECK(p.cauchy_gap < 1e-10);
  }
  ProfileRecord prev = at0;
  GridState later = free_evolve(fft, s0, m, 13.0);
  later.time = 13.0;
  const ProfileRecord back = extract_profile(fft, later, m, &prev);
  double worst = 0;
  for (int k = 0; k < 2; ++k) {
    for (std::size_t i = 0; i < back.fplus[k].size(); ++i) {
      worst = std::max(worst, std::abs(back.fplus[k][i] - s0.u[k][i]));
      worst = std::max(worst, std::abs(back.gplus[k][i] - s0.ut[k][i]));
    }
  }
  CHECK(worst < 1e-10 * id.epsilon);
  CHECK(back.cauchy_gap < 1e-10);
}

TEST_CASE("growth verdicts") {
  std::vector<DiagnosticsRow> flat, grow, spike;
  for (int i = 0; i <= 20; ++i) {
    flat.push_back(row(i, 1.0));
    grow.push_back(row(i, std::exp(0.2 * i)));
    spike.push_back(row(i, i == 10 ? 5.0 : 1.0));
  }
  auto g = growth_report(flat);
  CHECK(g.verdict == "bounded");
  CHECK(g.ratio == 1);
  CHECK(g.monotone_final_half);

  g = growth_report(grow);
  CHECK(g.verdict == "growing");
  CHECK(g.ratio == doctest::Approx(std::exp(4.0)));

  g = growth_report(spike);
  CHECK(g.verdict == "bounded");
  CHECK(g.ratio == 5);
  CHECK_FALSE(g.monotone_final_half);

  CHECK(growth_report(grow, 100).verdict == "bounded");
  CHECK(growth_report({}).verdict == "bounded");
}

TEST_CASE("linear run: bounded with unit energy ratio") {
  SimConfig c;
  c.grid = Grid::make(32, 30);
  c.t_end = 10;
  c.data.velocity_weights = {1, -1};
  DiagnosticsRecorder rec(c.grid, c.system.masses, {0}, {}, 0.05);
  run(c, std::ref(rec));
  const auto g = growth_report(rec.rows());
  CHECK(g.verdict == "bounded");
  CHECK(std::abs(g.ratio - 1) < 1e-10);
}

TEST_CASE("linear Klein-Gordon decay on a large box") {
  const Grid g = Grid::make(256, 200);
  Fft fft(g);
  const MassPair m;
  InitialData id;
  id.sigma = 2;
  const GridState s0 = initial_state(g, id);
  std::vector<std::pair<double, double>> samples;
  for (double t = 10; t <= 80; t += 2.5) samples.emplace_back(t, free_evolve(fft, s0, m, t).linfty());
  const double slope = decay_profile(samples, 10, 80).slope;
  CHECK(slope >= -1.3);
  CHECK(slope <= -0.7);
}

TEST_CASE("profile gap trend") {
  auto p = [](double t, double gap) { return ProfileSummary{t, gap, 1}; };
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK(gaps_decreasing({p(5, nan), p(10, 3), p(20, 2), p(40, 1)}));
  CHECK_FALSE(gaps_decreasing({p(5, nan), p(10, 3), p(20, 2), p(40, 2.5)}));
  CHECK_FALSE(gaps_decreasing({p(5, nan), p(10, 3), p(20, 2)}));
  CHECK(gaps_decreasing({p(5, nan), p(10, 1), p(20, 3), p(40, 2), p(80, 1)}));
}

TEST_CASE("recorder output") {
  CHECK(csv_header({0, 2}) == "time,energy,h0,h2,sup_weighted_1,sup_weighted_2,linfty,cauchy_gap");
  CHECK(doubling_times(5, 80) == std::vector<double>{5, 10, 20, 40, 80});
  CHECK(doubling_times(5, 79).size() == 4);
  CHECK(doubling_times(0, 80).empty());

  SimConfig c;
  c.system = builtin_systems().at("null_semilinear");
  c.grid = Grid::make(16, 20);
  c.t_end = 1;
  c.diag_every = 5;
  DiagnosticsRecorder rec(c.grid, c.system.masses, {0, 1}, {0.5}, 0.05);
  run(c, std::ref(rec));
  REQUIRE(rec.rows().size() == 3);
  const std::string csv = rec.csv();
  CHECK(csv.rfind(csv_header({0, 1}) + "\n0,", 0) == 0);
  // First row has no previous profile: empty trailing cell.
  const auto first_end = csv.find('\n', csv.find('\n') + 1);
  CHECK(csv[first_end - 1] == ',');
  CHECK(rec.profiles().size() == 1);
  CHECK(rec.profile_csv().rfind("time,profile_energy,cauchy_gap\n0.5,", 0) == 0);
  REQUIRE(rec.last_state());
  CHECK(rec.last_state()->time == doctest::Approx(1.0));
}
