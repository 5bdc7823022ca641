// Pseudo-spectral evaluation and time stepping of the 2D Klein-Gordon system
//   (box + m_j^2) u_j = F_j(u, du, d^2 u)
// on the periodic box [-L/2, L/2)^2.
#pragma once

#include "rkg/model.hpp"

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace rkg {

struct Decomposition;

/// Row-major n x n samples; index i * n + j with i along x1 and j along x2.
using Field = std::vector<double>;
/// Fourier coefficients on the r2c half plane, n x (n/2 + 1), normalized so
/// that f(x) = sum_k fhat_k exp(i k . x).
using Spectrum = std::vector<std::complex<double>>;

struct Grid {
  int n = 0;
  double length = 0;

  /// Requires n a power of two, n >= 16, length > 0 (std::invalid_argument otherwise).
  static Grid make(int n, double length);

  double dx() const { return length / n; }
  int points() const { return n * n; }
  int half() const { return n / 2 + 1; }
  int modes() const { return n * half(); }
  double x(int i) const { return -0.5 * length + i * dx(); }
  /// Signed wavenumber of full-axis index i (x1) and half-axis index j (x2).
  double k1(int i) const;
  double k2(int j) const;
  /// 2/3 rule: keep |index| <= n/3 on both axes.
  bool kept(int i, int j) const;
  friend bool operator==(const Grid&, const Grid&) = default;
};

/// FFTW r2c/c2r pair with private aligned buffers. Instances are not shared
/// between threads; plan creation is serialized internally.
class Fft {
 public:
  explicit Fft(const Grid& grid);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  const Grid& grid() const { return grid_; }
  Spectrum forward(const Field& f);
  Field inverse(const Spectrum& s);

 private:
  struct Impl;
  Grid grid_;
  std::unique_ptr<Impl> impl_;
};

/// Fourier multiplier of the spatial part of d (time counts are ignored).
/// Odd derivatives zero the Nyquist row/column.
Spectrum spectral_derivative(const Spectrum& s, const Grid& g, const DerivIndex& d);
/// d_axis^order of a physical field; axis must be x1 or x2.
Field spectral_derivative(Fft& fft, const Field& f, Axis axis, int order);
void apply_dealias(Spectrum& s, const Grid& g);

struct GridState {
  double time = 0;
  std::array<Field, 2> u;
  std::array<Field, 2> ut;

  bool finite() const;
  double linfty() const;
};

GridState zero_state(const Grid& g);

// ---------------------------------------------------------------------------
// Jets and bilinear forms on the grid

/// Spatial and time derivatives of both components at one instant.
/// time_derivs[n][k] is the spectrum of d_t^n u_{k+1}.
class JetEvaluator {
 public:
  JetEvaluator(Fft& fft, std::vector<std::array<Spectrum, 2>> time_derivs, bool dealias);

  /// d^alpha u_k as a grid field (cached). Throws std::out_of_range when the
  /// time order exceeds the available jets.
  const Field& get(const FieldRef& f);
  int max_time_order() const { return static_cast<int>(d_.size()) - 1; }
  /// Appends the spectra of the next time derivative.
  void push_time_derivative(std::array<Spectrum, 2> next);
  /// Pointwise sum c * (first)(second); factors are dealiased when enabled,
  /// the product is not.
  Field eval(const QuadForm& form);

 private:
  Fft& fft_;
  std::vector<std::array<Spectrum, 2>> d_;
  bool dealias_;
  std::map<FieldRef, Field> cache_;
};

/// Time derivatives d_t^n u up to max_n for the solution through `state`,
/// using d_t^{n+2} u_j = (Delta - m_j^2) d_t^n u_j + d_t^n F_j. Requires every
/// factor of F to carry at most one time derivative (true for valid systems).
std::vector<std::array<Spectrum, 2>> time_jets(Fft& fft, const QuadraticSystem& system, const GridState& state,
                                               int max_n);

/// F_j - (box + m_j^2) Lambda_j - N_j on the grid, all evaluated on the
/// solution through `state`.
std::array<Field, 2> normal_form_residual(Fft& fft, const QuadraticSystem& system, const Decomposition& d,
                                          const GridState& state);

// Null-form kernels on data carrying a value and its time derivative.
struct FieldData {
  Field value;
  Field dt;
};

Field kernel_qab(Fft& fft, Axis a, Axis b, const FieldData& phi, const FieldData& psi);
Field kernel_q0(Fft& fft, const FieldData& phi, const FieldData& psi);
Field kernel_g1(Fft& fft, const FieldData& v1, const FieldData& w2, const MassPair& m);
Field kernel_g2(Fft& fft, const FieldData& v1, const FieldData& w1, const MassPair& m);
Field kernel_h1(Fft& fft, Axis a, const FieldData& v1, const FieldData& w2);
Field kernel_h2(Fft& fft, Axis a, const FieldData& v1, const FieldData& w1);

// ---------------------------------------------------------------------------
// Time integration

struct InitialData {
  std::string family = "gaussian";
  double epsilon = 0.05;
  double sigma = 3.0;
  /// f_j = epsilon * weight_j * exp(-|x - x0|^2 / sigma^2), x0 = box center.
  std::array<double, 2> weights{1.0, 1.0};
  /// g_j = epsilon * velocity_weight_j * exp(-|x - x0|^2 / sigma^2).
  std::array<double, 2> velocity_weights{0.0, 0.0};
};

struct SimConfig {
  QuadraticSystem system;
  Grid grid = Grid::make(256, 200.0);
  double dt = 0.1;
  double t_end = 80.0;
  InitialData data;
  bool dealias = true;
  /// Steps between diagnostics rows.
  int diag_every = 10;
  /// Blow-up when max |u| exceeds blowup_factor * epsilon.
  double blowup_factor = 1e3;
};

/// Adds higher-order terms to the physical-space nonlinearity.
using ExtraTerm = std::function<void(const GridState&, std::array<Field, 2>&)>;

class BlowUp : public std::runtime_error {
 public:
  BlowUp(double time, const std::string& what) : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

GridState initial_state(const Grid& g, const InitialData& data);

/// Exact free Klein-Gordon flow over tau, mode by mode.
GridState free_evolve(Fft& fft, const GridState& s, const MassPair& masses, double tau);

/// Lawson (integrating factor) RK4: the linear part is propagated exactly by
/// cos(t Omega_j), sin(t Omega_j) / Omega_j, Omega_j = (m_j^2 - Delta)^{1/2}.
class Simulator {
 public:
  explicit Simulator(const SimConfig& config, ExtraTerm extra = {});
  ~Simulator();

  const SimConfig& config() const { return config_; }
  Fft& fft() { return *fft_; }

  /// Physical-space F(u) for the state (dealiased when configured).
  std::array<Field, 2> nonlinearity(const GridState& s);

  /// Advances by h (default config.dt). Throws BlowUp on non-finite values or
  /// when max |u| exceeds the configured bound.
  void step(GridState& s);
  void step(GridState& s, double h);
  /// nsteps steps of size h without intermediate physical-space round trips.
  void advance(GridState& s, int nsteps, double h);

 private:
  struct Spec;
  struct Flow;
  Spec to_spec(const GridState& s);
  GridState from_spec(const Spec& u, double time);
  void apply_nonlinearity(const Spec& u, double time, Spec& out);
  void lawson_step(Spec& u, double time, double h);
  void check(const Spec& u, double time);
  const Flow& flow(double h);

  SimConfig config_;
  ExtraTerm extra_;
  std::unique_ptr<Fft> fft_;
  std::vector<FieldRef> needed_;
  std::map<double, std::unique_ptr<Flow>> flows_;
  double bound_ = 0;
};

struct RunRecord {
  double t_reached = 0;
  long steps = 0;
  double wall_seconds = 0;
  bool blowup = false;
  std::string message;
};

/// Integrates from initial_state(config) to t_end, calling sink on the initial
/// state, every diag_every steps, and on the final (or last finite) state.
RunRecord run(const SimConfig& config, const std::function<void(const GridState&)>& sink, ExtraTerm extra = {});

/// Snapshot I/O: row-major little-endian doubles (u1, u2, ut1, ut2) plus a JSON sidecar.
void write_snapshot(const std::string& base_path, const GridState& s, const Grid& g);
GridState read_snapshot(const std::string& base_path, Grid* grid = nullptr);

}  // namespace rkg
