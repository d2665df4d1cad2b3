#include "tfi/phasefield.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "tfi/errors.hpp"

namespace tfi {

namespace {

double wrap_pi(double x) { return std::remainder(x, 2.0 * kPi); }

double positive_arg(cplx v) {
  double p = std::arg(v);
  if (p < 0.0) p += 2.0 * kPi;
  return p >= 2.0 * kPi ? 0.0 : p;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

struct NewtonOutcome {
  bool converged;
  double t, eta, residual;
};

NewtonOutcome newton_zero(const TwoHarmonicModel& m, const GaussianWindow& w, double t, double eta) {
  StftPartials p = stft_partials(m, w, t, eta);
  double res = std::abs(p.value);
  for (int it = 0; it < 50; ++it) {
    if (res <= 1e-13 * (1.0 + m.a())) break;
    // [Re dt, Re deta; Im dt, Im deta] * step = -(Re V, Im V)
    double j11 = p.d_t.real(), j12 = p.d_eta.real(), j21 = p.d_t.imag(), j22 = p.d_eta.imag();
    double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det)) return {false, t, eta, res};
    double dt = -(j22 * p.value.real() - j12 * p.value.imag()) / det;
    double de = -(-j21 * p.value.real() + j11 * p.value.imag()) / det;
    double lambda = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half) {
      StftPartials trial = stft_partials(m, w, t + lambda * dt, eta + lambda * de);
      if (std::abs(trial.value) < res) {
        t += lambda * dt;
        eta += lambda * de;
        p = trial;
        res = std::abs(trial.value);
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) break;
  }
  return {res <= 1e-10 * (1.0 + m.a()), t, eta, res};
}

// Analytic zero set: one zero per destructive time, at eta_avg.
std::vector<std::pair<double, double>> analytic_zeros_near(const TwoHarmonicModel& m, const GaussianWindow& w,
                                                           double t_lo, double t_hi) {
  std::vector<std::pair<double, double>> out;
  if (m.a() <= 0.0) return out;
  double avg = eta_avg(m, w);
  long k0 = static_cast<long>(std::floor(t_lo * m.delta() - 0.5)) - 1;
  long k1 = static_cast<long>(std::ceil(t_hi * m.delta() - 0.5)) + 1;
  for (long k = k0; k <= k1; ++k) out.emplace_back(destructive_time(m, static_cast<int>(k)), avg);
  return out;
}

}  // namespace

double phase(const TwoHarmonicModel& model, const GaussianWindow& window, double t, double eta) {
  cplx v = stft_closed_form(model, window, t, eta);
  if (std::abs(v) <= 1e-14 * (1.0 + model.a()))
    throw Error(ErrorKind::PhaseUndefined, "|V| vanishes at t=" + num(t) + ", eta=" + num(eta));
  return positive_arg(v);
}

double default_winding_radius(const GaussianWindow& window) {
  return 0.05 * std::min(window.sigma(), 1.0 / (kPi * window.sigma()));
}

WindingResult contour_winding(const TwoHarmonicModel& model, const GaussianWindow& window, double t0, double eta0,
                              double rho, int n_samples) {
  if (!(rho > 0.0)) throw Error(ErrorKind::InvalidArgument, "winding radius must be > 0");
  if (n_samples < 256) throw Error(ErrorKind::InvalidArgument, "winding needs n_samples >= 256");
  const double s = window.sigma();
  const double floor_abs = 1e-12 * (1.0 + model.a());
  int evals = 0;
  auto sample = [&](double theta) {
    double t = t0 + s * rho * std::cos(theta);
    double eta = eta0 - rho / (kPi * s) * std::sin(theta);
    cplx v = stft_closed_form(model, window, t, eta);
    ++evals;
    if (std::abs(v) < floor_abs)
      throw Error(ErrorKind::ContourThroughZero,
                  "contour passes through a zero near t=" + num(t) + ", eta=" + num(eta));
    return v;
  };
  // Sum of principal increments, bisecting any step larger than pi/2.
  auto increment = [&](auto&& self, double th_a, cplx va, double th_b, cplx vb, int depth) -> double {
    double d = std::arg(vb / va);
    if (std::abs(d) <= kPi / 2.0 || depth >= 40) return d;
    double mid = 0.5 * (th_a + th_b);
    cplx vm = sample(mid);
    return self(self, th_a, va, mid, vm, depth + 1) + self(self, mid, vm, th_b, vb, depth + 1);
  };
  double total = 0.0;
  cplx first = sample(0.0);
  cplx prev = first;
  for (int i = 1; i <= n_samples; ++i) {
    double th_prev = 2.0 * kPi * (i - 1) / n_samples;
    double th = 2.0 * kPi * i / n_samples;
    cplx cur = (i == n_samples) ? first : sample(th);
    total += increment(increment, th_prev, prev, th, cur, 0);
    prev = cur;
  }
  double raw = total / (2.0 * kPi);
  int rounded = static_cast<int>(std::lround(raw));
  if (std::abs(raw - rounded) > 0.01)
    throw Error(ErrorKind::Inconclusive, "winding " + num(raw) + " is not within 0.01 of an integer");
  return {rounded, raw, evals};
}

int winding_number(const TwoHarmonicModel& model, const GaussianWindow& window, const ZeroPoint& zero, double rho,
                   int n_samples) {
  const double s = window.sigma();
  double reach = s * rho;
  auto zs = analytic_zeros_near(model, window, zero.t0 - 4.0 * reach, zero.t0 + 4.0 * reach);
  std::vector<double> dist;
  for (auto& [tz, ez] : zs)
    dist.push_back(std::hypot(tz - zero.t0, kPi * s * s * (ez - zero.eta0)));
  std::sort(dist.begin(), dist.end());
  // dist[0] is the zero itself when the centre is a zero.
  std::size_t first_other = (!dist.empty() && dist[0] < 0.5 * reach) ? 1 : 0;
  if (first_other < dist.size() && dist[first_other] < 3.0 * reach)
    throw Error(ErrorKind::Precondition, "another zero lies within 3 sigma rho of the contour centre");
  return contour_winding(model, window, zero.t0, zero.eta0, rho, n_samples).winding;
}

std::vector<ZeroPoint> locate_zeros(const TwoHarmonicModel& model, const GaussianWindow& window, const TFGrid& region,
                                    ZeroSearchDiagnostics* diag) {
  region.validate();
  ZeroSearchDiagnostics local;
  ZeroSearchDiagnostics& d = diag ? *diag : local;
  std::vector<std::pair<double, double>> seeds;
  if (model.a() > 0.0) {
    for (auto& z : analytic_zeros_near(model, window, region.t_min, region.t_max))
      if (z.first >= region.t_min && z.first <= region.t_max && z.second >= region.eta_min &&
          z.second <= region.eta_max)
        seeds.push_back(z);
  }
  // Cells whose corner phases wind by a full turn.
  std::vector<cplx> vals(region.size());
  for (int i = 0; i < region.n_t; ++i)
    for (int j = 0; j < region.n_eta; ++j)
      vals[static_cast<std::size_t>(i) * region.n_eta + j] =
          stft_closed_form(model, window, region.t_at(i), region.eta_at(j));
  auto at = [&](int i, int j) { return vals[static_cast<std::size_t>(i) * region.n_eta + j]; };
  for (int i = 0; i + 1 < region.n_t; ++i) {
    for (int j = 0; j + 1 < region.n_eta; ++j) {
      cplx c[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
      bool degenerate = false;
      double turn = 0.0;
      for (int q = 0; q < 4; ++q) {
        if (std::abs(c[q]) == 0.0) degenerate = true;
        else if (std::abs(c[(q + 1) % 4]) != 0.0) turn += wrap_pi(std::arg(c[(q + 1) % 4]) - std::arg(c[q]));
      }
      if (degenerate || std::abs(turn) > kPi)
        seeds.emplace_back(0.5 * (region.t_at(i) + region.t_at(i + 1)), 0.5 * (region.eta_at(j) + region.eta_at(j + 1)));
    }
  }
  d.candidates = static_cast<int>(seeds.size());

  std::vector<NewtonOutcome> refined(seeds.size());
  detail::parallel_for(seeds.size(), [&](std::size_t i) {
    refined[i] = newton_zero(model, window, seeds[i].first, seeds[i].second);
  });

  std::vector<ZeroPoint> zeros;
  for (std::size_t i = 0; i < refined.size(); ++i) {
    const auto& r = refined[i];
    if (!r.converged) {
      ++d.dropped;
      d.notes.push_back("Newton did not converge from seed t=" + num(seeds[i].first) + ", eta=" + num(seeds[i].second) +
                        " (|V|=" + num(r.residual) + ")");
      continue;
    }
    if (r.t < region.t_min || r.t > region.t_max || r.eta < region.eta_min || r.eta > region.eta_max) continue;
    bool dup = false;
    for (auto& z : zeros)
      if (std::abs(z.t0 - r.t) < 1e-8 && std::abs(z.eta0 - r.eta) < 1e-8) dup = true;
    if (!dup) zeros.push_back({r.t, r.eta, 0, 0.0, r.residual});
  }
  std::sort(zeros.begin(), zeros.end(),
            [](const ZeroPoint& x, const ZeroPoint& y) { return x.t0 != y.t0 ? x.t0 < y.t0 : x.eta0 < y.eta0; });
  double rho = default_winding_radius(window);
  for (auto& z : zeros) {
    WindingResult w = contour_winding(model, window, z.t0, z.eta0, rho);
    z.winding = w.winding;
    z.winding_raw = w.raw;
    if (std::abs(w.winding) != 1) d.notes.push_back("zero at t=" + num(z.t0) + " has winding " + std::to_string(w.winding));
  }
  return zeros;
}

namespace {

double field_floor(const ComplexField& field) {
  double peak = 0.0;
  for (const cplx& v : field.values) peak = std::max(peak, std::abs(v));
  return 1e-14 * std::max(1.0, peak);
}

}  // namespace

RealField phase_field(const ComplexField& field) {
  RealField out{field.grid, std::vector<double>(field.values.size())};
  double floor_abs = field_floor(field);
  for (std::size_t i = 0; i < field.values.size(); ++i)
    out.values[i] = std::abs(field.values[i]) <= floor_abs ? 0.0 : positive_arg(field.values[i]);
  return out;
}

RealField amplitude_weighted_phase(const ComplexField& field) {
  if (field.tag != FieldTag::Stft) throw Error(ErrorKind::InvalidArgument, "amplitude-weighted phase needs an STFT field");
  RealField out = phase_field(field);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= std::abs(field.values[i]);
  return out;
}

}  // namespace tfi
