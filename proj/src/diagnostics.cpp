#include "rkg/diagnostics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace rkg {

namespace {

double mass_value(const MassPair& m, int comp) { return to_double(m.mass(comp)); }

// r2c half-plane multiplicity: columns 0 and n/2 appear once, the rest twice.
double half_weight(const Grid& g, int j) { return (j == 0 || j == g.n / 2) ? 1.0 : 2.0; }

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double energy_norm(Fft& fft, const GridState& s, const MassPair& masses) {
  const Grid& g = fft.grid();
  double total = 0;
  for (int k = 0; k < 2; ++k) {
    const double m2 = std::pow(mass_value(masses, k + 1), 2);
    const Field d1 = spectral_derivative(fft, s.u[k], Axis::x1, 1);
    const Field d2 = spectral_derivative(fft, s.u[k], Axis::x2, 1);
    double acc = 0;
    for (int i = 0; i < g.points(); ++i)
      acc += s.ut[k][i] * s.ut[k][i] + d1[i] * d1[i] + d2[i] * d2[i] + m2 * s.u[k][i] * s.u[k][i];
    total += 0.5 * acc;
  }
  return std::sqrt(total * g.dx() * g.dx());
}

double energy_norm_spectral(Fft& fft, const GridState& s, const MassPair& masses) {
  const Grid& g = fft.grid();
  const int h = g.half();
  double total = 0;
  for (int k = 0; k < 2; ++k) {
    const double m2 = std::pow(mass_value(masses, k + 1), 2);
    const Spectrum a = fft.forward(s.u[k]);
    const Spectrum b = fft.forward(s.ut[k]);
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < h; ++j) {
        // The odd-derivative Nyquist convention drops those gradient components.
        const double k1 = i == g.n / 2 ? 0.0 : g.k1(i);
        const double k2 = j == g.n / 2 ? 0.0 : g.k2(j);
        const int idx = i * h + j;
        total += 0.5 * half_weight(g, j) * (std::norm(b[idx]) + (k1 * k1 + k2 * k2 + m2) * std::norm(a[idx]));
      }
  }
  return std::sqrt(total * g.length * g.length);
}

double sobolev_norm(Fft& fft, const Field& f, double s) {
  const Grid& g = fft.grid();
  const int h = g.half();
  const Spectrum a = fft.forward(f);
  double total = 0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < h; ++j) {
      const double k2 = g.k1(i) * g.k1(i) + g.k2(j) * g.k2(j);
      total += half_weight(g, j) * std::pow(1 + k2, s) * std::norm(a[i * h + j]);
    }
  return std::sqrt(total) * g.length;
}

double sobolev_norm(Fft& fft, const GridState& st, double s) {
  double total = 0;
  for (int k = 0; k < 2; ++k) {
    total += std::pow(sobolev_norm(fft, st.u[k], s), 2);
    total += std::pow(sobolev_norm(fft, st.ut[k], s), 2);
  }
  return std::sqrt(total);
}

std::array<double, 2> sup_weighted(const Grid& g, const GridState& s, const std::array<double, 2>& center) {
  std::array<double, 2> out{0, 0};
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const double r = std::hypot(g.x(i) - center[0], g.x(j) - center[1]);
      const double w = std::sqrt(1 + (s.time + r) * (s.time + r));
      for (int k = 0; k < 2; ++k) out[k] = std::max(out[k], w * std::abs(s.u[k][i * g.n + j]));
    }
  return out;
}

double weighted_moment(const Grid& g, const GridState& s, int k, const std::array<double, 2>& center) {
  double total = 0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const double r2 = std::pow(g.x(i) - center[0], 2) + std::pow(g.x(j) - center[1], 2);
      const double w = std::pow(1 + r2, k);
      for (int c = 0; c < 2; ++c) total += w * s.u[c][i * g.n + j] * s.u[c][i * g.n + j];
    }
  return total * g.dx() * g.dx();
}

DecayFit decay_profile(const std::vector<std::pair<double, double>>& samples, double t_lo, double t_hi) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [t, v] : samples)
    if (t > 0 && t >= t_lo && t <= t_hi && v > 0) pts.emplace_back(std::log(t), std::log(v));
  if (pts.size() < 3) throw InsufficientData("decay_profile: fewer than 3 samples in the fit window");
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double n = static_cast<double>(pts.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0) throw InsufficientData("decay_profile: samples do not span a time interval");
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = static_cast<int>(pts.size());
  return fit;
}

namespace {

double profile_distance(Fft& fft, const ProfileRecord& a, const ProfileRecord& b, const MassPair& masses) {
  GridState d;
  for (int k = 0; k < 2; ++k) {
    d.u[k] = a.fplus[k];
    d.ut[k] = a.gplus[k];
    for (std::size_t i = 0; i < d.u[k].size(); ++i) {
      d.u[k][i] -= b.fplus[k][i];
      d.ut[k][i] -= b.gplus[k][i];
    }
  }
  return energy_norm(fft, d, masses);
}

}  // namespace

ProfileRecord extract_profile(Fft& fft, const GridState& s, const MassPair& masses, const ProfileRecord* previous) {
  ProfileRecord rec;
  rec.time = s.time;
  GridState back = free_evolve(fft, s, masses, -s.time);
  rec.fplus = std::move(back.u);
  rec.gplus = std::move(back.ut);
  if (previous) rec.cauchy_gap = profile_distance(fft, rec, *previous, masses);
  return rec;
}

GrowthReport growth_report(const std::vector<DiagnosticsRow>& history, double threshold) {
  GrowthReport r;
  if (history.empty() || history.front().energy <= 0) {
    r.verdict = "bounded";
    return r;
  }
  const double e0 = history.front().energy;
  double emax = e0;
  for (const auto& row : history) emax = std::max(emax, row.energy);
  r.ratio = emax / e0;
  r.final_ratio = history.back().energy / e0;
  const double t_mid = 0.5 * (history.front().time + history.back().time);
  r.monotone_final_half = history.size() >= 3;
  for (std::size_t i = 1; i < history.size(); ++i)
    if (history[i - 1].time >= t_mid && history[i].energy < history[i - 1].energy) r.monotone_final_half = false;
  r.verdict = (r.monotone_final_half && r.ratio > threshold) ? "growing" : "bounded";
  return r;
}

bool gaps_decreasing(const std::vector<ProfileSummary>& profiles, int doublings) {
  std::vector<double> gaps;
  for (const auto& p : profiles)
    if (!std::isnan(p.cauchy_gap)) gaps.push_back(p.cauchy_gap);
  if (static_cast<int>(gaps.size()) < doublings) return false;
  for (std::size_t i = gaps.size() - doublings + 1; i < gaps.size(); ++i)
    if (!(gaps[i] < gaps[i - 1])) return false;
  return true;
}

DiagnosticsRecorder::DiagnosticsRecorder(const Grid& grid, const MassPair& masses, std::vector<int> sobolev_orders,
                                         std::vector<double> profile_times, double time_tolerance)
    : fft_(grid),
      masses_(masses),
      orders_(std::move(sobolev_orders)),
      profile_times_(std::move(profile_times)),
      tol_(time_tolerance) {}

void DiagnosticsRecorder::operator()(const GridState& s) {
  DiagnosticsRow row;
  row.time = s.time;
  row.energy = energy_norm(fft_, s, masses_);
  for (int o : orders_) row.sobolev.emplace_back(o, sobolev_norm(fft_, s, o));
  row.sup_weighted = sup_weighted(fft_.grid(), s);
  row.linfty = s.linfty();
  ProfileRecord prof = extract_profile(fft_, s, masses_, prev_row_profile_ ? &*prev_row_profile_ : nullptr);
  row.cauchy_gap = prof.cauchy_gap;

  for (double t : profile_times_) {
    if (std::abs(t - s.time) > tol_) continue;
    ProfileRecord at = extract_profile(fft_, s, masses_, prev_profile_ ? &*prev_profile_ : nullptr);
    ProfileSummary sum;
    sum.time = s.time;
    sum.cauchy_gap = at.cauchy_gap;
    GridState free;
    free.u = at.fplus;
    free.ut = at.gplus;
    sum.profile_energy = energy_norm(fft_, free, masses_);
    profiles_.push_back(sum);
    prev_profile_ = std::move(at);
    break;
  }
  prev_row_profile_ = std::move(prof);
  rows_.push_back(std::move(row));
  last_ = s;
}

std::string csv_header(const std::vector<int>& sobolev_orders) {
  std::string h = "time,energy";
  for (int o : sobolev_orders) h += ",h" + std::to_string(o);
  return h + ",sup_weighted_1,sup_weighted_2,linfty,cauchy_gap";
}

std::string DiagnosticsRecorder::csv() const {
  std::ostringstream os;
  os << csv_header(orders_) << "\n";
  for (const auto& r : rows_) {
    os << num(r.time) << "," << num(r.energy);
    for (const auto& [o, v] : r.sobolev) os << "," << num(v);
    os << "," << num(r.sup_weighted[0]) << "," << num(r.sup_weighted[1]) << "," << num(r.linfty) << ","
       << num(r.cauchy_gap) << "\n";
  }
  return os.str();
}

std::string DiagnosticsRecorder::profile_csv() const {
  std::ostringstream os;
  os << "time,profile_energy,cauchy_gap\n";
  for (const auto& p : profiles_) os << num(p.time) << "," << num(p.profile_energy) << "," << num(p.cauchy_gap) << "\n";
  return os.str();
}

std::vector<double> doubling_times(double t0, double t_end) {
  std::vector<double> out;
  if (!(t0 > 0)) return out;
  for (double t = t0; t <= t_end * (1 + 1e-12); t *= 2) out.push_back(t);
  return out;
}

nlohmann::json growth_json(const GrowthReport& g) {
  return {{"verdict", g.verdict},
          {"ratio", g.ratio},
          {"final_ratio", g.final_ratio},
          {"monotone_final_half", g.monotone_final_half}};
}

}  // namespace rkg
