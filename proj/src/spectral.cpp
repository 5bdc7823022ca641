#include "rkg/spectral.hpp"

#include "rkg/normalform.hpp"

#include <fftw3.h>
#include <json.hpp>

#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <set>

namespace rkg {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int signed_index(int i, int n) { return i <= n / 2 ? i : i - n; }

double mass_value(const MassPair& m, int comp) { return to_double(m.mass(comp)); }

void axpy(Field& y, double a, const Field& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

// ---------------------------------------------------------------------------
// Grid and transforms

Grid Grid::make(int n, double length) {
  if (n < 16 || (n & (n - 1)) != 0) throw std::invalid_argument("grid size must be a power of two >= 16");
  if (!(length > 0) || !std::isfinite(length)) throw std::invalid_argument("box length must be positive");
  return Grid{n, length};
}

double Grid::k1(int i) const { return 2 * M_PI / length * signed_index(i, n); }
double Grid::k2(int j) const { return 2 * M_PI / length * j; }

bool Grid::kept(int i, int j) const {
  const int cut = n / 3;
  return std::abs(signed_index(i, n)) <= cut && j <= cut;
}

struct Fft::Impl {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

Fft::Fft(const Grid& grid) : grid_(grid), impl_(std::make_unique<Impl>()) {
  std::lock_guard lock(planner_mutex());
  impl_->real = fftw_alloc_real(grid.points());
  impl_->spec = fftw_alloc_complex(grid.modes());
  // ESTIMATE plans are chosen without timing, so results do not depend on machine load.
  impl_->fwd = fftw_plan_dft_r2c_2d(grid.n, grid.n, impl_->real, impl_->spec, FFTW_ESTIMATE);
  impl_->inv = fftw_plan_dft_c2r_2d(grid.n, grid.n, impl_->spec, impl_->real, FFTW_ESTIMATE);
}

Fft::~Fft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(impl_->fwd);
  fftw_destroy_plan(impl_->inv);
  fftw_free(impl_->real);
  fftw_free(impl_->spec);
}

Spectrum Fft::forward(const Field& f) {
  if (static_cast<int>(f.size()) != grid_.points()) throw std::invalid_argument("Fft::forward: size mismatch");
  std::memcpy(impl_->real, f.data(), sizeof(double) * f.size());
  fftw_execute(impl_->fwd);
  Spectrum s(grid_.modes());
  const double scale = 1.0 / grid_.points();
  for (int i = 0; i < grid_.modes(); ++i) s[i] = {impl_->spec[i][0] * scale, impl_->spec[i][1] * scale};
  return s;
}

Field Fft::inverse(const Spectrum& s) {
  if (static_cast<int>(s.size()) != grid_.modes()) throw std::invalid_argument("Fft::inverse: size mismatch");
  std::memcpy(impl_->spec, s.data(), sizeof(fftw_complex) * s.size());
  fftw_execute(impl_->inv);
  return Field(impl_->real, impl_->real + grid_.points());
}

Spectrum spectral_derivative(const Spectrum& s, const Grid& g, const DerivIndex& d) {
  const int n1 = d.count(Axis::x1);
  const int n2 = d.count(Axis::x2);
  if (n1 == 0 && n2 == 0) return s;
  const int h = g.half();
  auto power = [](double k, int p) {
    // (i k)^p
    std::complex<double> z(1, 0);
    for (int q = 0; q < p; ++q) z *= std::complex<double>(0, k);
    return z;
  };
  Spectrum out(s.size());
  for (int i = 0; i < g.n; ++i) {
    const bool nyq1 = i == g.n / 2 && n1 % 2 == 1;
    const auto f1 = power(g.k1(i), n1);
    for (int j = 0; j < h; ++j) {
      const bool nyq2 = j == g.n / 2 && n2 % 2 == 1;
      out[i * h + j] = (nyq1 || nyq2) ? 0.0 : s[i * h + j] * f1 * power(g.k2(j), n2);
    }
  }
  return out;
}

Field spectral_derivative(Fft& fft, const Field& f, Axis axis, int order) {
  if (axis == Axis::t) throw std::invalid_argument("spectral_derivative: time derivatives are not spectral");
  DerivIndex d;
  for (int q = 0; q < order; ++q) d = d.with(axis);
  return fft.inverse(spectral_derivative(fft.forward(f), fft.grid(), d));
}

void apply_dealias(Spectrum& s, const Grid& g) {
  const int h = g.half();
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < h; ++j)
      if (!g.kept(i, j)) s[i * h + j] = 0.0;
}

bool GridState::finite() const {
  for (const auto* set : {&u, &ut})
    for (const auto& f : *set)
      for (double v : f)
        if (!std::isfinite(v)) return false;
  return true;
}

double GridState::linfty() const {
  double m = 0;
  for (const auto& f : u)
    for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

GridState zero_state(const Grid& g) {
  GridState s;
  for (int k = 0; k < 2; ++k) {
    s.u[k].assign(g.points(), 0.0);
    s.ut[k].assign(g.points(), 0.0);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Jets

JetEvaluator::JetEvaluator(Fft& fft, std::vector<std::array<Spectrum, 2>> time_derivs, bool dealias)
    : fft_(fft), d_(std::move(time_derivs)), dealias_(dealias) {}

void JetEvaluator::push_time_derivative(std::array<Spectrum, 2> next) { d_.push_back(std::move(next)); }

const Field& JetEvaluator::get(const FieldRef& f) {
  if (auto it = cache_.find(f); it != cache_.end()) return it->second;
  const int nt = f.d.count(Axis::t);
  if (nt > max_time_order())
    throw std::out_of_range("JetEvaluator: time derivative of order " + std::to_string(nt) + " not available");
  Spectrum s = spectral_derivative(d_[nt][f.comp - 1], fft_.grid(), f.d);
  if (dealias_) apply_dealias(s, fft_.grid());
  return cache_.emplace(f, fft_.inverse(s)).first->second;
}

Field JetEvaluator::eval(const QuadForm& form) {
  Field out(fft_.grid().points(), 0.0);
  for (const auto& [p, c] : form) {
    const double cd = to_double(c);
    const Field& a = get(p.first);
    const Field& b = get(p.second);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += cd * a[i] * b[i];
  }
  return out;
}

namespace {

// d_t^n of sum c (A)(B) via Leibniz.
Field time_derivative_of_form(JetEvaluator& jets, const QuadForm& form, int n, int points) {
  Field out(points, 0.0);
  for (const auto& [p, c] : form) {
    const double cd = to_double(c);
    double binom = 1;
    for (int i = 0; i <= n; ++i) {
      DerivIndex da = p.first.d, db = p.second.d;
      for (int q = 0; q < i; ++q) da = da.with(Axis::t);
      for (int q = 0; q < n - i; ++q) db = db.with(Axis::t);
      const Field& a = jets.get({p.first.comp, da});
      const Field& b = jets.get({p.second.comp, db});
      const double w = cd * binom;
      for (int x = 0; x < points; ++x) out[x] += w * a[x] * b[x];
      binom = binom * (n - i) / (i + 1);
    }
  }
  return out;
}

}  // namespace

std::vector<std::array<Spectrum, 2>> time_jets(Fft& fft, const QuadraticSystem& system, const GridState& state,
                                               int max_n) {
  const Grid& g = fft.grid();
  for (int j = 1; j <= 2; ++j)
    for (const auto& [p, c] : system.eq(j))
      if (p.first.d.count(Axis::t) > 1 || p.second.d.count(Axis::t) > 1)
        throw std::invalid_argument("time_jets: factor with more than one time derivative");

  std::vector<std::array<Spectrum, 2>> d;
  d.push_back({fft.forward(state.u[0]), fft.forward(state.u[1])});
  if (max_n >= 1) d.push_back({fft.forward(state.ut[0]), fft.forward(state.ut[1])});
  JetEvaluator jets(fft, d, false);
  const int h = g.half();
  for (int n = 0; n + 2 <= max_n; ++n) {
    std::array<Spectrum, 2> next;
    for (int k = 0; k < 2; ++k) {
      const double m2 = std::pow(mass_value(system.masses, k + 1), 2);
      Spectrum f = fft.forward(time_derivative_of_form(jets, system.eq(k + 1), n, g.points()));
      next[k].resize(g.modes());
      for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < h; ++j) {
          const double k2 = g.k1(i) * g.k1(i) + g.k2(j) * g.k2(j);
          next[k][i * h + j] = -(k2 + m2) * d[n][k][i * h + j] + f[i * h + j];
        }
    }
    d.push_back(next);
    jets.push_time_derivative(std::move(next));
  }
  return d;
}

std::array<Field, 2> normal_form_residual(Fft& fft, const QuadraticSystem& system, const Decomposition& d,
                                          const GridState& state) {
  int need = 1;
  for (int j = 0; j < 2; ++j) {
    for (const auto& [p, c] : d.lambda[j])
      need = std::max({need, p.first.d.count(Axis::t) + 2, p.second.d.count(Axis::t) + 2});
    for (const auto& t : d.strongnull_remainder[j])
      need = std::max({need, t.first.d.count(Axis::t) + 1, t.second.d.count(Axis::t) + 1});
  }
  JetEvaluator jets(fft, time_jets(fft, system, state, need), false);
  const int points = fft.grid().points();

  auto box = [&](const FieldRef& a) {
    Field out = jets.get(a.derive(Axis::t).derive(Axis::t));
    axpy(out, -1.0, jets.get(a.derive(Axis::x1).derive(Axis::x1)));
    axpy(out, -1.0, jets.get(a.derive(Axis::x2).derive(Axis::x2)));
    return out;
  };

  std::array<Field, 2> out;
  for (int j = 1; j <= 2; ++j) {
    Field r = jets.eval(system.eq(j));
    const double mj2 = std::pow(mass_value(system.masses, j), 2);
    for (const auto& [p, c] : d.lambda[j - 1]) {
      const double cd = to_double(c);
      const Field& a = jets.get(p.first);
      const Field& b = jets.get(p.second);
      const Field boxa = box(p.first);
      const Field boxb = box(p.second);
      std::array<const Field*, 3> da, db;
      for (int q = 0; q < 3; ++q) {
        da[q] = &jets.get(p.first.derive(kAxes[q]));
        db[q] = &jets.get(p.second.derive(kAxes[q]));
      }
      for (int x = 0; x < points; ++x) {
        const double q0 = (*da[0])[x] * (*db[0])[x] - (*da[1])[x] * (*db[1])[x] - (*da[2])[x] * (*db[2])[x];
        r[x] -= cd * (boxa[x] * b[x] + a[x] * boxb[x] + 2 * q0 + mj2 * a[x] * b[x]);
      }
    }
    for (const auto& t : d.strongnull_remainder[j - 1]) {
      const double cd = to_double(t.coeff);
      const Field& fa = jets.get(t.first.derive(t.a));
      const Field& fb = jets.get(t.first.derive(t.b));
      const Field& ga = jets.get(t.second.derive(t.a));
      const Field& gb = jets.get(t.second.derive(t.b));
      for (int x = 0; x < points; ++x) r[x] -= cd * (fa[x] * gb[x] - fb[x] * ga[x]);
    }
    out[j - 1] = std::move(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kernels

namespace {

Field partial(Fft& fft, const FieldData& f, Axis a) {
  return a == Axis::t ? f.dt : spectral_derivative(fft, f.value, a, 1);
}

Field combine(const Field& a, const Field& b, const Field& c, const Field& d, double sign) {
  Field out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i] + sign * c[i] * d[i];
  return out;
}

}  // namespace

Field kernel_qab(Fft& fft, Axis a, Axis b, const FieldData& phi, const FieldData& psi) {
  return combine(partial(fft, phi, a), partial(fft, psi, b), partial(fft, phi, b), partial(fft, psi, a), -1.0);
}

Field kernel_q0(Fft& fft, const FieldData& phi, const FieldData& psi) {
  Field out(phi.value.size());
  std::array<Field, 3> dp, dq;
  for (int q = 0; q < 3; ++q) {
    dp[q] = partial(fft, phi, kAxes[q]);
    dq[q] = partial(fft, psi, kAxes[q]);
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = dp[0][i] * dq[0][i] - dp[1][i] * dq[1][i] - dp[2][i] * dq[2][i];
  return out;
}

Field kernel_g1(Fft& fft, const FieldData& v1, const FieldData& w2, const MassPair& m) {
  Field out = kernel_q0(fft, v1, w2);
  const double m1sq = std::pow(mass_value(m, 1), 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= 2 * m1sq * v1.value[i] * w2.value[i];
  return out;
}

Field kernel_g2(Fft& fft, const FieldData& v1, const FieldData& w1, const MassPair& m) {
  Field out = kernel_q0(fft, v1, w1);
  const double m1sq = std::pow(mass_value(m, 1), 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += m1sq * v1.value[i] * w1.value[i];
  return out;
}

Field kernel_h1(Fft& fft, Axis a, const FieldData& v1, const FieldData& w2) {
  Field out = combine(v1.value, partial(fft, w2, a), w2.value, partial(fft, v1, a), 2.0);
  return out;
}

Field kernel_h2(Fft& fft, Axis a, const FieldData& v1, const FieldData& w1) {
  return combine(v1.value, partial(fft, w1, a), w1.value, partial(fft, v1, a), -1.0);
}

// ---------------------------------------------------------------------------
// Integration

GridState initial_state(const Grid& g, const InitialData& data) {
  if (data.family != "gaussian") throw std::invalid_argument("unknown initial data family \"" + data.family + "\"");
  if (!(data.epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  if (!(data.sigma > 0)) throw std::invalid_argument("sigma must be positive");
  GridState s = zero_state(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const double r2 = g.x(i) * g.x(i) + g.x(j) * g.x(j);
      const double bump = data.epsilon * std::exp(-r2 / (data.sigma * data.sigma));
      for (int k = 0; k < 2; ++k) {
        s.u[k][i * g.n + j] = data.weights[k] * bump;
        s.ut[k][i * g.n + j] = data.velocity_weights[k] * bump;
      }
    }
  return s;
}

// (u1, u2, ut1, ut2) spectra.
struct Simulator::Spec {
  std::array<Spectrum, 4> c;
};

// Per component and mode: [[cos, sin / Omega], [-Omega sin, cos]] over one tau.
struct Simulator::Flow {
  std::array<std::vector<double>, 2> c, s, w;
};

namespace {

void fill_flow(const Grid& g, const MassPair& m, double tau, std::array<std::vector<double>, 2>& c,
               std::array<std::vector<double>, 2>& s, std::array<std::vector<double>, 2>& w) {
  const int h = g.half();
  for (int k = 0; k < 2; ++k) {
    const double mk = mass_value(m, k + 1);
    c[k].resize(g.modes());
    s[k].resize(g.modes());
    w[k].resize(g.modes());
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < h; ++j) {
        const double om = std::sqrt(mk * mk + g.k1(i) * g.k1(i) + g.k2(j) * g.k2(j));
        const int idx = i * h + j;
        c[k][idx] = std::cos(om * tau);
        s[k][idx] = std::sin(om * tau) / om;
        w[k][idx] = -om * std::sin(om * tau);
      }
  }
}

}  // namespace

GridState free_evolve(Fft& fft, const GridState& st, const MassPair& masses, double tau) {
  const Grid& g = fft.grid();
  std::array<std::vector<double>, 2> c, s, w;
  fill_flow(g, masses, tau, c, s, w);
  GridState out;
  out.time = st.time + tau;
  for (int k = 0; k < 2; ++k) {
    Spectrum a = fft.forward(st.u[k]);
    Spectrum b = fft.forward(st.ut[k]);
    Spectrum na(a.size()), nb(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      na[i] = c[k][i] * a[i] + s[k][i] * b[i];
      nb[i] = w[k][i] * a[i] + c[k][i] * b[i];
    }
    out.u[k] = fft.inverse(na);
    out.ut[k] = fft.inverse(nb);
  }
  return out;
}

Simulator::Simulator(const SimConfig& config, ExtraTerm extra)
    : config_(config), extra_(std::move(extra)), fft_(std::make_unique<Fft>(config.grid)) {
  require_valid(config_.system);
  if (!(config_.dt > 0)) throw std::invalid_argument("dt must be positive");
  std::set<FieldRef> refs;
  for (int j = 1; j <= 2; ++j)
    for (const auto& [p, c] : config_.system.eq(j)) {
      refs.insert(p.first);
      refs.insert(p.second);
    }
  needed_.assign(refs.begin(), refs.end());
  bound_ = config_.blowup_factor * config_.data.epsilon;
}

Simulator::~Simulator() = default;

const Simulator::Flow& Simulator::flow(double h) {
  auto& slot = flows_[h];
  if (!slot) {
    slot = std::make_unique<Flow>();
    fill_flow(config_.grid, config_.system.masses, h, slot->c, slot->s, slot->w);
  }
  return *slot;
}

Simulator::Spec Simulator::to_spec(const GridState& s) {
  Spec out;
  for (int k = 0; k < 2; ++k) {
    out.c[k] = fft_->forward(s.u[k]);
    out.c[k + 2] = fft_->forward(s.ut[k]);
  }
  return out;
}

GridState Simulator::from_spec(const Spec& u, double time) {
  GridState s;
  s.time = time;
  for (int k = 0; k < 2; ++k) {
    s.u[k] = fft_->inverse(u.c[k]);
    s.ut[k] = fft_->inverse(u.c[k + 2]);
  }
  return s;
}

void Simulator::apply_nonlinearity(const Spec& u, double time, Spec& out) {
  const Grid& g = config_.grid;
  JetEvaluator jets(*fft_, {{u.c[0], u.c[1]}, {u.c[2], u.c[3]}}, config_.dealias);
  std::array<Field, 2> f;
  for (int j = 0; j < 2; ++j) f[j] = jets.eval(config_.system.eq(j + 1));
  if (extra_) extra_(from_spec(u, time), f);
  for (int k = 0; k < 2; ++k) {
    out.c[k].assign(g.modes(), 0.0);
    out.c[k + 2] = fft_->forward(f[k]);
    if (config_.dealias) apply_dealias(out.c[k + 2], g);
  }
}

std::array<Field, 2> Simulator::nonlinearity(const GridState& s) {
  Spec out;
  apply_nonlinearity(to_spec(s), s.time, out);
  return {fft_->inverse(out.c[2]), fft_->inverse(out.c[3])};
}

namespace {

// y = E x (+ y if accumulate), on the full 4-component state.
template <class Spec, class Flow>
void propagate(const Flow& e, const Spec& x, Spec& y) {
  for (int k = 0; k < 2; ++k) {
    const auto& a = x.c[k];
    const auto& b = x.c[k + 2];
    auto& ya = y.c[k];
    auto& yb = y.c[k + 2];
    ya.resize(a.size());
    yb.resize(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto na = e.c[k][i] * a[i] + e.s[k][i] * b[i];
      const auto nb = e.w[k][i] * a[i] + e.c[k][i] * b[i];
      ya[i] = na;
      yb[i] = nb;
    }
  }
}

// y += h * x
template <class Spec>
void add_scaled(Spec& y, double h, const Spec& x) {
  for (int q = 0; q < 4; ++q)
    for (std::size_t i = 0; i < y.c[q].size(); ++i) y.c[q][i] += h * x.c[q][i];
}

}  // namespace

void Simulator::lawson_step(Spec& u, double time, double h) {
  const Flow& full = flow(h);
  const Flow& halfstep = flow(0.5 * h);
  Spec k1, k2, k3, k4, tmp, stage, eu, ehu;

  apply_nonlinearity(u, time, k1);

  tmp = u;
  add_scaled(tmp, 0.5 * h, k1);
  propagate(halfstep, tmp, stage);
  apply_nonlinearity(stage, time + 0.5 * h, k2);

  propagate(halfstep, u, ehu);
  stage = ehu;
  add_scaled(stage, 0.5 * h, k2);
  apply_nonlinearity(stage, time + 0.5 * h, k3);

  propagate(full, u, eu);
  propagate(halfstep, k3, tmp);
  stage = eu;
  add_scaled(stage, h, tmp);
  apply_nonlinearity(stage, time + h, k4);

  // u <- E(h) u + h/6 [E(h) k1 + 2 E(h/2)(k2 + k3) + k4]
  Spec acc;
  propagate(full, k1, acc);
  Spec mid = k2;
  add_scaled(mid, 1.0, k3);
  propagate(halfstep, mid, tmp);
  add_scaled(acc, 2.0, tmp);
  add_scaled(acc, 1.0, k4);
  u = eu;
  add_scaled(u, h / 6.0, acc);
}

void Simulator::check(const Spec& u, double time) {
  for (int k = 0; k < 2; ++k) {
    const Field f = fft_->inverse(u.c[k]);
    for (double v : f) {
      if (!std::isfinite(v)) throw BlowUp(time, "non-finite value at t = " + std::to_string(time));
      if (std::abs(v) > bound_)
        throw BlowUp(time, "max |u| exceeded " + std::to_string(bound_) + " at t = " + std::to_string(time));
    }
  }
}

void Simulator::step(GridState& s) { advance(s, 1, config_.dt); }
void Simulator::step(GridState& s, double h) { advance(s, 1, h); }

void Simulator::advance(GridState& s, int nsteps, double h) {
  if (h == 0 || nsteps <= 0) return;
  Spec u = to_spec(s);
  double t = s.time;
  for (int n = 0; n < nsteps; ++n) {
    lawson_step(u, t, h);
    t = s.time + (n + 1) * h;
    check(u, t);
  }
  s = from_spec(u, t);
}

RunRecord run(const SimConfig& config, const std::function<void(const GridState&)>& sink, ExtraTerm extra) {
  const auto start = std::chrono::steady_clock::now();
  Simulator sim(config, std::move(extra));
  GridState s = initial_state(config.grid, config.data);
  RunRecord rec;
  if (sink) sink(s);
  const long total = std::lround(config.t_end / config.dt);
  const int every = std::max(1, config.diag_every);
  try {
    while (rec.steps < total) {
      const int chunk = static_cast<int>(std::min<long>(every, total - rec.steps));
      GridState next = s;
      // Time from the step count, so diagnostics rows land on exact multiples of dt.
      sim.advance(next, chunk, config.dt);
      next.time = (rec.steps + chunk) * config.dt;
      s = std::move(next);
      rec.steps += chunk;
      if (sink) sink(s);
    }
  } catch (const BlowUp& e) {
    rec.blowup = true;
    rec.message = e.what();
  }
  rec.t_reached = s.time;
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

// ---------------------------------------------------------------------------
// Snapshots

namespace {

void write_le(std::ofstream& os, const Field& f) {
  for (double v : f) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
}

Field read_le(std::ifstream& is, int count) {
  Field f(count);
  for (int i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    is.read(reinterpret_cast<char*>(&bits), sizeof bits);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    f[i] = std::bit_cast<double>(bits);
  }
  if (!is) throw std::runtime_error("snapshot: truncated data file");
  return f;
}

}  // namespace

void write_snapshot(const std::string& base_path, const GridState& s, const Grid& g) {
  std::ofstream bin(base_path + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot write " + base_path + ".bin");
  write_le(bin, s.u[0]);
  write_le(bin, s.u[1]);
  write_le(bin, s.ut[0]);
  write_le(bin, s.ut[1]);
  nlohmann::json side{{"n", g.n},
                      {"length", g.length},
                      {"time", s.time},
                      {"dtype", "float64-le"},
                      {"layout", "row-major, index i*n+j, i along x1"},
                      {"fields", {"u1", "u2", "ut1", "ut2"}}};
  std::ofstream js(base_path + ".json");
  js << side.dump(2) << "\n";
}

GridState read_snapshot(const std::string& base_path, Grid* grid) {
  std::ifstream js(base_path + ".json");
  if (!js) throw std::runtime_error("cannot read " + base_path + ".json");
  const auto side = nlohmann::json::parse(js);
  const Grid g = Grid::make(side.at("n").get<int>(), side.at("length").get<double>());
  std::ifstream bin(base_path + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot read " + base_path + ".bin");
  GridState s;
  s.time = side.at("time").get<double>();
  s.u[0] = read_le(bin, g.points());
  s.u[1] = read_le(bin, g.points());
  s.ut[0] = read_le(bin, g.points());
  s.ut[1] = read_le(bin, g.points());
  if (grid) *grid = g;
  return s;
}

}  // namespace rkg
