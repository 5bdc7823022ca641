// Energy, Sobolev and weighted sup norms, decay fits, free profiles and
// growth verdicts for simulator states.
#pragma once

#include "rkg/spectral.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace rkg {

/// sqrt(sum_j 1/2 int (d_t u_j)^2 + |grad u_j|^2 + m_j^2 u_j^2 dx), grid quadrature
/// with spectral gradients.
double energy_norm(Fft& fft, const GridState& s, const MassPair& masses);
/// The same quantity summed on the Fourier side (Parseval).
double energy_norm_spectral(Fft& fft, const GridState& s, const MassPair& masses);

/// ||(1 + |k|^2)^{s/2} fhat|| scaled so that s = 0 is the L^2 norm on the box.
double sobolev_norm(Fft& fft, const Field& f, double s);
/// sqrt(sum_j ||u_j||_{H^s}^2 + ||d_t u_j||_{H^s}^2).
double sobolev_norm(Fft& fft, const GridState& st, double s);

/// max_x <t + |x - x0|> |u_j(t, x)| per component, <y> = (1 + y^2)^{1/2}.
std::array<double, 2> sup_weighted(const Grid& g, const GridState& s, const std::array<double, 2>& center = {0, 0});

/// Surrogate for the weighted data norm: sum_j int <x - x0>^{2k} u_j^2 dx.
double weighted_moment(const Grid& g, const GridState& s, int k, const std::array<double, 2>& center = {0, 0});

struct DecayFit {
  double slope = 0;
  double intercept = 0;
  int points = 0;
};

class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Least-squares slope of log value against log t over samples with
/// t_lo <= t <= t_hi and t > 0. Needs at least 3 such samples.
DecayFit decay_profile(const std::vector<std::pair<double, double>>& samples, double t_lo, double t_hi);

struct ProfileRecord {
  double time = 0;
  std::array<Field, 2> fplus;
  std::array<Field, 2> gplus;
  /// Energy-norm distance to the previous extraction (NaN for the first).
  double cauchy_gap = std::numeric_limits<double>::quiet_NaN();
};

/// (f+, g+) = free flow over -t applied to (u(t), d_t u(t)).
ProfileRecord extract_profile(Fft& fft, const GridState& s, const MassPair& masses,
                              const ProfileRecord* previous = nullptr);

struct DiagnosticsRow {
  double time = 0;
  double energy = 0;
  std::vector<std::pair<int, double>> sobolev;
  std::array<double, 2> sup_weighted{};
  double linfty = 0;
  double cauchy_gap = std::numeric_limits<double>::quiet_NaN();
};

struct GrowthReport {
  std::string verdict;  // "bounded" or "growing"
  double ratio = 1;     // max_t E(t) / E(0)
  double final_ratio = 1;
  /// Energy non-decreasing at every row of the last half of the window.
  bool monotone_final_half = false;
};

GrowthReport growth_report(const std::vector<DiagnosticsRow>& history, double threshold = 2.0);

struct ProfileSummary {
  double time = 0;
  double cauchy_gap = std::numeric_limits<double>::quiet_NaN();
  double profile_energy = 0;
};

/// cauchy_gap strictly decreasing over the last `doublings` consecutive gaps.
bool gaps_decreasing(const std::vector<ProfileSummary>& profiles, int doublings = 3);

/// Consumes states from run(): one DiagnosticsRow per state, and a profile
/// extraction at each requested time.
class DiagnosticsRecorder {
 public:
  DiagnosticsRecorder(const Grid& grid, const MassPair& masses, std::vector<int> sobolev_orders,
                      std::vector<double> profile_times, double time_tolerance);

  void operator()(const GridState& s);

  const std::vector<DiagnosticsRow>& rows() const { return rows_; }
  const std::vector<ProfileSummary>& profiles() const { return profiles_; }
  const std::optional<GridState>& last_state() const { return last_; }
  std::string csv() const;
  std::string profile_csv() const;

 private:
  Fft fft_;
  MassPair masses_;
  std::vector<int> orders_;
  std::vector<double> profile_times_;
  double tol_;
  std::vector<DiagnosticsRow> rows_;
  std::vector<ProfileSummary> profiles_;
  std::optional<ProfileRecord> prev_row_profile_;
  std::optional<ProfileRecord> prev_profile_;
  std::optional<GridState> last_;
};

std::string csv_header(const std::vector<int>& sobolev_orders);

/// Doubling times t0, 2 t0, ... up to t_end.
std::vector<double> doubling_times(double t0, double t_end);

nlohmann::json growth_json(const GrowthReport& g);

}  // namespace rkg
