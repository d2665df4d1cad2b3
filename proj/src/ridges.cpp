#include "tfi/ridges.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "parallel.hpp"
#include "tfi/errors.hpp"

namespace tfi {

namespace {

double power(const TwoHarmonicModel& m, const GaussianWindow& w, double t, double eta) {
  return std::norm(stft_closed_form(m, w, t, eta));
}

// d/deta |V|^2
double power_slope(const TwoHarmonicModel& m, const GaussianWindow& w, double t, double eta) {
  StftPartials p = stft_partials(m, w, t, eta);
  return 2.0 * (std::conj(p.value) * p.d_eta).real();
}

// Maximiser of |V(t, .)|^2 inside (lo, hi), given a sampled interior maximum there.
double refine_max(const TwoHarmonicModel& m, const GaussianWindow& w, double t, double lo, double hi) {
  double slo = power_slope(m, w, t, lo), shi = power_slope(m, w, t, hi);
  if (slo > 0.0 && shi < 0.0) {
    std::uintmax_t iters = 200;
    auto tol = [](double x, double y) { return std::abs(y - x) < 1e-12; };
    auto r = boost::math::tools::toms748_solve([&](double e) { return power_slope(m, w, t, e); }, lo, hi, slo, shi,
                                               tol, iters);
    return 0.5 * (r.first + r.second);
  }
  auto r = boost::math::tools::brent_find_minima([&](double e) { return -power(m, w, t, e); }, lo, hi,
                                                 std::numeric_limits<double>::digits / 2);
  return r.first;
}

std::vector<double> maxima_at_resolution(const TwoHarmonicModel& m, const GaussianWindow& w, double t,
                                         FrequencyBand band, int n) {
  std::vector<double> eta(n), p(n);
  for (int i = 0; i < n; ++i) {
    eta[i] = band.lo + (band.hi - band.lo) * i / (n - 1);
    p[i] = power(m, w, t, eta[i]);
  }
  std::vector<double> found;
  for (int i = 1; i + 1 < n; ++i) {
    if (p[i] > p[i - 1] && p[i] > p[i + 1]) {
      double e = refine_max(m, w, t, eta[i - 1], eta[i + 1]);
      if (found.empty() || e - found.back() > 1e-8) found.push_back(e);
    }
  }
  return found;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

FrequencyBand default_band(const TwoHarmonicModel& model, const GaussianWindow& window) {
  double pad = 4.0 / (kPi * window.sigma());
  return {model.xi0() - pad, model.xi1() + pad};
}

std::vector<double> frequency_maxima(const TwoHarmonicModel& model, const GaussianWindow& window, double t,
                                     FrequencyBand band, int n_samples) {
  double pad = 3.0 / (kPi * window.sigma());
  if (band.lo > model.xi0() - pad || band.hi < model.xi1() + pad)
    throw Error(ErrorKind::BandCoverage, "band [" + num(band.lo) + ", " + num(band.hi) + "] does not cover [" +
                                             num(model.xi0() - pad) + ", " + num(model.xi1() + pad) + "]");
  if (n_samples < 512) throw Error(ErrorKind::InvalidArgument, "maxima counting needs n_samples >= 512");
  int n = n_samples;
  auto coarse = maxima_at_resolution(model, window, t, band, n);
  for (int level = 0; level < 6; ++level) {
    auto fine = maxima_at_resolution(model, window, t, band, 2 * n - 1);
    if (fine.size() == coarse.size()) return fine;
    coarse = std::move(fine);
    n = 2 * n - 1;
  }
  throw Error(ErrorKind::Inconclusive, "maxima count unstable under refinement at t=" + num(t));
}

int count_frequency_maxima(const TwoHarmonicModel& model, const GaussianWindow& window, double t, FrequencyBand band,
                           int n_samples) {
  return static_cast<int>(frequency_maxima(model, window, t, band, n_samples).size());
}

StftCriticalGap critical_gap_stft(double a, const GaussianWindow& window) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::InvalidArgument, "a must be > 0");
  auto delta_of = [&](double s) { return (1.0 + s) / (kPi * window.sigma() * std::sqrt(2.0 * s)); };
  if (a == 1.0) return {delta_of(1.0), 1.0};
  // ln(s/a) - (s - 1/s)/2 is strictly decreasing in s; bisect in log s.
  auto g = [a](double log_s) {
    double s = std::exp(log_s);
    return std::log(s / a) - 0.5 * (s - 1.0 / s);
  };
  double lo = std::log(1e-8), hi = std::log(1e8);
  double glo = g(lo), ghi = g(hi);
  if (!(glo > 0.0 && ghi < 0.0)) throw Error(ErrorKind::SolverFailure, "no bracket for the s-equation in (1e-8, 1e8)");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  double s = std::exp(0.5 * (lo + hi));
  double residual = std::abs(std::log(s / a) - 0.5 * (s - 1.0 / s));
  if (residual > 1e-12) throw Error(ErrorKind::SolverFailure, "s-equation residual " + num(residual));
  return {delta_of(s), s};
}

namespace {

double bubble_argument(const TwoHarmonicModel& model, const GaussianWindow& window, bool strict) {
  if (model.a() != 1.0) throw Error(ErrorKind::HypothesisViolation, "bubble formulas require a = 1");
  double cd2 = window.C() * model.delta() * model.delta();
  // Delta = sqrt(2)/(pi sigma) rounds to just above 2; that boundary is admissible when not strict.
  if (!strict && cd2 > 2.0 && cd2 <= 2.0 * (1.0 + 1e-12)) cd2 = 2.0;
  if (strict ? cd2 >= 2.0 : cd2 > 2.0)
    throw Error(ErrorKind::NoBifurcation, "pi^2 sigma^2 delta^2 = " + num(cd2) + " leaves no bubble");
  return cd2;
}

}  // namespace

BifurcationTimes bifurcation_times(const TwoHarmonicModel& model, const GaussianWindow& window, int k) {
  double cd2 = bubble_argument(model, window, false);
  double d = model.delta();
  double offset = std::acos(cd2 - 1.0) / (2.0 * kPi * d);
  return {k / d + offset, (k + 1) / d - offset};
}

EllipseParams bubble_ellipse(const TwoHarmonicModel& model, const GaussianWindow& window, int k) {
  double cd2 = bubble_argument(model, window, true);
  double d = model.delta();
  return {(k + 0.5) / d, model.xibar(), 1.0 / (std::sqrt(2.0) * kPi * window.sigma()),
          std::acos(1.0 - cd2) / (2.0 * kPi * d), k};
}

double ellipse_residual(const TwoHarmonicModel& model, const GaussianWindow& window, int k, int n_arc) {
  if (n_arc < 256) throw Error(ErrorKind::InvalidArgument, "ellipse residual needs n_arc >= 256");
  EllipseParams e = bubble_ellipse(model, window, k);
  const double c = window.C();
  double total = 0.0;
  // Periodic trapezoid rule in the angle.
  for (int i = 0; i < n_arc; ++i) {
    double u = 2.0 * kPi * i / n_arc;
    double t = e.center_t + e.semi_axis_t * std::cos(u);
    double eta = e.center_eta + e.semi_axis_eta * std::sin(u);
    SpectrogramTerms s = spectrogram_decomposition(model, window, t, eta);
    double d0 = eta - model.xi0(), d1 = eta - model.xi1();
    double slope = -4.0 * c * d0 * s.g0 - 4.0 * c * d1 * s.g1 - 2.0 * c * (d0 + d1) * s.cross;
    double speed = std::hypot(e.semi_axis_t * std::sin(u), e.semi_axis_eta * std::cos(u));
    total += std::abs(slope) * speed;
  }
  return total * 2.0 * kPi / n_arc;
}

DestructiveExtrema destructive_extrema(const TwoHarmonicModel& model, const GaussianWindow& window, int k) {
  const double t = destructive_time(model, k);
  const double avg = eta_avg(model, window);
  const double d = model.delta();
  const double lo = model.xi0() - 2.0 * d, hi = model.xi1() + 2.0 * d;
  if (!(avg > lo && avg < hi)) throw Error(ErrorKind::SolverFailure, "eta_avg outside the search window");

  auto side_max = [&](double a_end, double b_end) {
    const int n = 2048;
    int best = -1;
    double best_p = -1.0;
    for (int i = 1; i < n; ++i) {
      double e = a_end + (b_end - a_end) * i / n;
      double p = power(model, window, t, e);
      if (p > best_p) best_p = p, best = i;
    }
    if (best <= 1 || best >= n - 1)
      throw Error(ErrorKind::SolverFailure, "maximiser sits on the search boundary");
    double step = (b_end - a_end) / n;
    double e = a_end + step * best;
    return refine_max(model, window, t, e - step, e + step);
  };

  DestructiveExtrema out;
  out.eta_avg = avg;
  out.eta_minus = side_max(lo, avg);
  out.eta_plus = side_max(avg, hi);
  double damp = std::exp(-window.C() * d * d);
  double a = model.a();
  out.minus_gap_bound = d * a * damp / (1.0 + a * damp);
  out.plus_gap_bound = d * damp / (a + damp);
  out.bounds_hold = out.eta_minus < model.xi0() && out.eta_plus > model.xi1() &&
                    model.xi0() - out.eta_minus <= out.minus_gap_bound &&
                    out.eta_plus - model.xi1() <= out.plus_gap_bound;
  return out;
}

RidgeReport extract_ridges(const ComplexField& field) {
  if (field.tag != FieldTag::Stft) throw Error(ErrorKind::InvalidArgument, "ridge extraction needs an STFT field");
  const TFGrid& g = field.grid;
  g.validate();
  std::vector<std::vector<double>> per_column(g.n_t);
  detail::parallel_for(static_cast<std::size_t>(g.n_t), [&](std::size_t i) {
    std::vector<double> p(g.n_eta);
    for (int j = 0; j < g.n_eta; ++j) p[j] = std::norm(field.at(static_cast<int>(i), j));
    auto& col = per_column[i];
    for (int j = 1; j + 1 < g.n_eta; ++j) {
      if (!(p[j] > p[j - 1])) continue;
      // Equal neighbours (a peak midway between samples) form one plateau maximum.
      int e = j;
      while (e + 1 < g.n_eta && p[e + 1] == p[j]) ++e;
      if (e + 1 >= g.n_eta || !(p[e + 1] < p[j])) continue;
      if (e > j) {
        col.push_back(0.5 * (g.eta_at(j) + g.eta_at(e)));
        j = e;
        continue;
      }
      double curv = p[j + 1] - 2.0 * p[j] + p[j - 1];
      if (curv < 0.0) {
        // three-point parabola vertex
        double offset = 0.5 * (p[j - 1] - p[j + 1]) / curv;
        col.push_back(g.eta_at(j) + offset * g.eta_step());
      }
    }
  });

  RidgeReport rep;
  for (int i = 0; i < g.n_t; ++i) {
    double t = g.t_at(i);
    rep.maxima_count_per_t.emplace_back(t, static_cast<int>(per_column[i].size()));
    for (double e : per_column[i]) rep.points.push_back({t, e});
    if (i > 0 && per_column[i].size() != per_column[i - 1].size())
      rep.bifurcation_times.push_back(0.5 * (g.t_at(i - 1) + t));
  }

  // Each maximal run of columns with two maxima bounded by count changes on both
  // sides is treated as one bubble.
  int k = 0;
  for (int i = 0; i < g.n_t;) {
    if (per_column[i].size() != 2) {
      ++i;
      continue;
    }
    int start = i;
    while (i < g.n_t && per_column[i].size() == 2) ++i;
    int stop = i - 1;
    if (start == 0 || i == g.n_t) continue;
    double t_l = 0.5 * (g.t_at(start - 1) + g.t_at(start));
    double t_r = 0.5 * (g.t_at(stop) + g.t_at(stop + 1));
    double half_gap = 0.0, centre = 0.0;
    for (int c = start; c <= stop; ++c) {
      half_gap = std::max(half_gap, 0.5 * (per_column[c][1] - per_column[c][0]));
      centre += 0.5 * (per_column[c][0] + per_column[c][1]);
    }
    rep.ellipses.push_back({0.5 * (t_l + t_r), centre / (stop - start + 1), half_gap, 0.5 * (t_r - t_l), k++});
  }
  return rep;
}

}  // namespace tfi
