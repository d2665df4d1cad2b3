#include "tfi/squeeze.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "parallel.hpp"
#include "quadrature.hpp"
#include "tfi/errors.hpp"

namespace tfi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Panels whose kernel value is below e^{-kSkipExponent} times its peak are dropped.
constexpr double kSkipExponent = 700.0;

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double support_floor(const TwoHarmonicModel& m, const GaussianWindow& w) {
  return std::max(std::abs(m.xi0()), std::abs(m.xi1())) + 3.0 / (kPi * w.sigma());
}

struct Sample {
  cplx weight;
  cplx reassigned;
  bool at_zero;
  double gradient;
};

class Integrand {
 public:
  Integrand(const TwoHarmonicModel& m, const GaussianWindow& w, const SqueezeConfig& cfg, double t, double xi)
      : m_(m), w_(w), cfg_(cfg), t_(t), xi_(xi), norm_(1.0 / std::sqrt(kPi * cfg.alpha)) {}

  Sample sample(double eta) const {
    ReassignValue r = eta_s(m_, w_, t_, eta);
    cplx z = r.value;
    if (cfg_.mode == ReassignMode::Phase) z = z.real();
    cplx weight = cfg_.weighting == Weighting::Stft ? stft_closed_form(m_, w_, t_, eta) : cplx(1.0);
    return {weight, z, r.at_zero, eta_s_gradient(m_, w_, t_, eta)};
  }

  cplx operator()(double eta) const {
    ReassignValue r = eta_s(m_, w_, t_, eta);
    if (r.at_zero) return 0.0;
    cplx z = r.value;
    if (cfg_.mode == ReassignMode::Phase) z = z.real();
    double g = norm_ * std::exp(-std::norm(z - xi_) / cfg_.alpha);
    if (g == 0.0) return 0.0;
    if (cfg_.weighting == Weighting::Indicator) return g;
    return stft_closed_form(m_, w_, t_, eta) * g;
  }

  double xi() const { return xi_; }

 private:
  const TwoHarmonicModel& m_;
  const GaussianWindow& w_;
  const SqueezeConfig& cfg_;
  double t_, xi_, norm_;
};

struct Panel {
  double a, b;
  int depth;
};

// Base partition: uniform panels across the transition of the reassignment map and
// geometrically growing panels in the flat tails.
std::vector<Panel> base_partition(const TwoHarmonicModel& m, const GaussianWindow& w, const SqueezeConfig& cfg,
                                  double lo, double hi, int n_base) {
  double act_lo = lo, act_hi = hi;
  if (m.a() > 0.0) {
    double centre = eta_avg(m, w);
    double half = 40.0 / (2.0 * w.C() * m.delta());
    if (centre + half > lo && centre - half < hi) {
      act_lo = std::max(lo, centre - half);
      act_hi = std::min(hi, centre + half);
    }
  }
  double cap = cfg.weighting == Weighting::Stft ? 0.25 / (kPi * w.sigma()) : kInf;
  double step = (act_hi - act_lo) / n_base;
  std::vector<Panel> out;
  // left tail, outward from the active window
  std::vector<Panel> left;
  for (double x = act_lo, width = step; x > lo; width = std::min(2.0 * width, cap)) {
    double a = std::max(lo, x - width);
    left.push_back({a, x, 0});
    x = a;
  }
  out.assign(left.rbegin(), left.rend());
  for (int i = 0; i < n_base; ++i) {
    double a = act_lo + i * step;
    double b = (i + 1 == n_base) ? act_hi : act_lo + (i + 1) * step;
    out.push_back({a, b, 0});
  }
  for (double x = act_hi, width = step; x < hi; width = std::min(2.0 * width, cap)) {
    double b = std::min(hi, x + width);
    out.push_back({x, b, 0});
    x = b;
  }
  return out;
}

cplx integrate_squeeze(const TwoHarmonicModel& m, const GaussianWindow& w, const SqueezeConfig& cfg, double t,
                       double xi, int n_base) {
  double lo, hi;
  if (cfg.weighting == Weighting::Stft) {
    lo = m.xi0() - 10.0 / (kPi * w.sigma());
    hi = m.xi1() + 10.0 / (kPi * w.sigma());
  } else {
    lo = -cfg.radius;
    hi = cfg.radius;
  }
  Integrand f(m, w, cfg, t, xi);
  const double skip_dist = std::sqrt(kSkipExponent * cfg.alpha);
  const double split_change = 0.5 * std::sqrt(cfg.alpha);

  std::vector<Panel> stack = base_partition(m, w, cfg, lo, hi, n_base);
  std::reverse(stack.begin(), stack.end());
  std::vector<Panel> kept;
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    double mid = 0.5 * (p.a + p.b);
    std::array<Sample, 3> s = {f.sample(p.a), f.sample(mid), f.sample(p.b)};
    bool singular = false;
    double dist = kInf, grad = 0.0;
    for (const auto& x : s) {
      if (x.at_zero || !std::isfinite(x.gradient)) {
        singular = true;
        continue;
      }
      dist = std::min(dist, std::abs(x.reassigned - xi));
      grad = std::max(grad, x.gradient);
    }
    double width = p.b - p.a;
    if (!singular && dist - grad * width > skip_dist) continue;
    if ((singular || grad * width > split_change) && p.depth < cfg.quad.max_depth) {
      stack.push_back({mid, p.b, p.depth + 1});
      stack.push_back({p.a, mid, p.depth + 1});
      continue;
    }
    kept.push_back(p);
  }
  if (kept.empty()) return 0.0;

  std::vector<detail::PanelEstimate> est(kept.size());
  std::vector<double> panel_mag(kept.size());
  cplx total = 0.0;
  double kept_len = 0.0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    est[i] = detail::gauss_kronrod_panel(f, kept[i].a, kept[i].b);
    panel_mag[i] = std::abs(est[i].value);
    total += est[i].value;
    kept_len += kept[i].b - kept[i].a;
  }
  double scale = std::abs(total);
  if (scale == 0.0) {
    for (auto& e : est) scale += std::abs(e.value);
  }
  if (scale == 0.0) return 0.0;
  cplx refined = 0.0;
  const double n = static_cast<double>(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    double share = std::max((kept[i].b - kept[i].a) / kept_len, 1.0 / n);
    // Kronrod error estimates stall near roundoff, so the per-panel target is floored there.
    double tol = std::max(cfg.quad.rel_tol * scale * share, 64.0 * kEps * std::max(scale, panel_mag[i]));
    if (est[i].error <= tol) {
      refined += est[i].value;
    } else {
      int depth = std::max(0, std::min(16, cfg.quad.max_depth - kept[i].depth));
      refined += detail::adaptive_refine(f, kept[i].a, kept[i].b, est[i], tol, depth);
    }
  }
  return refined;
}

}  // namespace

void SqueezeConfig::validate(const TwoHarmonicModel& model, const GaussianWindow& window) const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorKind::InvalidArgument, "alpha must be finite and > 0");
  if (quad.base_panels < 16) throw Error(ErrorKind::InvalidArgument, "squeeze quadrature needs >= 16 base panels");
  if (!(quad.rel_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "squeeze rel_tol must be > 0");
  if (quad.max_depth < 0) throw Error(ErrorKind::InvalidArgument, "squeeze max_depth must be >= 0");
  if (weighting == Weighting::Indicator) {
    double need = support_floor(model, window);
    if (!(radius > need) || !std::isfinite(radius))
      throw Error(ErrorKind::InvalidArgument,
                  "indicator radius " + num(radius) + " must exceed max(|xi0|,|xi1|) + 3/(pi sigma) = " + num(need));
  }
}

double indicator_radius_default(const TwoHarmonicModel& model, const GaussianWindow& window, double alpha,
                                double min_distance) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be > 0");
  if (!(min_distance > 0.0)) throw Error(ErrorKind::InvalidArgument, "min_distance must be > 0");
  double c = min_distance * min_distance;
  double expo = c / (2.0 * alpha);
  double r = expo > 700.0 ? 1.0 / alpha : std::min(1.0 / alpha, std::exp(expo));
  return std::max(r, support_floor(model, window) * (1.0 + 1e-9) + 1e-9);
}

double mollifier(double alpha, cplx z) {
  return std::exp(-std::norm(z) / alpha) / std::sqrt(kPi * alpha);
}

cplx squeeze_transform(const TwoHarmonicModel& model, const GaussianWindow& window, const SqueezeConfig& config,
                       double t, double xi) {
  config.validate(model, window);
  cplx v = integrate_squeeze(model, window, config, t, xi, config.quad.base_panels);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw Error(ErrorKind::NonFinite, "squeeze quadrature produced a non-finite value at t=" + num(t) + ", xi=" + num(xi));
  return v;
}

SqueezeCheck squeeze_transform_checked(const TwoHarmonicModel& model, const GaussianWindow& window,
                                       const SqueezeConfig& config, double t, double xi) {
  cplx v = squeeze_transform(model, window, config, t, xi);
  SqueezeConfig doubled = config;
  doubled.quad.base_panels *= 2;
  cplx v2 = squeeze_transform(model, window, doubled, t, xi);
  double denom = std::max(std::abs(v2), std::numeric_limits<double>::min());
  return {v, v2, std::abs(v - v2) / denom};
}

std::vector<cplx> squeeze_cross_section(const TwoHarmonicModel& model, const GaussianWindow& window,
                                        const SqueezeConfig& config, double t, const std::vector<double>& xis) {
  config.validate(model, window);
  std::vector<cplx> out(xis.size());
  detail::parallel_for(xis.size(), [&](std::size_t i) { out[i] = squeeze_transform(model, window, config, t, xis[i]); });
  return out;
}

ComplexField squeeze_field(const TwoHarmonicModel& model, const GaussianWindow& window, const SqueezeConfig& config,
                           const TFGrid& grid) {
  grid.validate();
  config.validate(model, window);
  ComplexField field{grid, std::vector<cplx>(grid.size()), FieldTag::Squeeze};
  detail::parallel_for(grid.size(), [&](std::size_t idx) {
    int i = static_cast<int>(idx / grid.n_eta), j = static_cast<int>(idx % grid.n_eta);
    field.values[idx] = squeeze_transform(model, window, config, grid.t_at(i), grid.eta_at(j));
  });
  return field;
}

double TimeSlot::time(const TwoHarmonicModel& model) const {
  switch (kind) {
    case SlotKind::Constructive: return constructive_time(model, k);
    case SlotKind::Destructive: return destructive_time(model, k);
    case SlotKind::Intermediate: return intermediate_time(model, k);
  }
  return 0.0;
}

namespace {

void require_extreme_slot(TimeSlot slot) {
  if (slot.kind == SlotKind::Intermediate)
    throw Error(ErrorKind::NotApplicable, "only constructive and destructive times have closed-form densities");
}

bool on_support(const TwoHarmonicModel& m, TimeSlot slot, double xi) {
  bool inside = xi > m.xi0() && xi < m.xi1();
  return slot.kind == SlotKind::Constructive ? inside : !inside && xi != m.xi0() && xi != m.xi1();
}

// Density of V pushed forward by eta_s; derived directly from the definition, so the sign is
// the one that makes it positive where V is positive.
cplx stft_density(const TwoHarmonicModel& m, const GaussianWindow& w, TimeSlot slot, double xi) {
  if (m.a() == 0.0) return 0.0;
  const double c = w.C(), d = m.delta(), a = m.a();
  double d0 = xi - m.xi0(), d1 = xi - m.xi1();
  double ustar = d0 / d1;
  // ratio of the two Gaussian terms at the preimage
  double u = slot.kind == SlotKind::Constructive ? -ustar : ustar;
  double lr = std::log(u / a);
  double envelope = std::exp(-c * d * d / 4.0) * std::sqrt(a / u) * std::exp(-lr * lr / (4.0 * c * d * d));
  cplx rot = std::polar(1.0, 2.0 * kPi * m.xi0() * slot.time(m));
  if (slot.kind == SlotKind::Constructive) return rot * (1.0 - ustar) * envelope / (2.0 * c * d0 * (-d1));
  return rot * (1.0 - ustar) * envelope / (2.0 * c * d0 * d1);
}

}  // namespace

cplx pushforward_density(const TwoHarmonicModel& model, const GaussianWindow& window, Weighting weighting,
                         TimeSlot slot, double xi) {
  require_extreme_slot(slot);
  if (xi == model.xi0() || xi == model.xi1())
    throw Error(ErrorKind::Singularity, "density diverges at xi = " + num(xi));
  if (!on_support(model, slot, xi)) return 0.0;
  if (weighting == Weighting::Indicator)
    return 1.0 / (2.0 * window.C() * std::abs(xi - model.xi0()) * std::abs(xi - model.xi1()));
  return stft_density(model, window, slot, xi);
}

namespace {

Approximation tagged_density(const TwoHarmonicModel& m, const GaussianWindow& w, Weighting weighting, TimeSlot slot,
                             double xi) {
  require_extreme_slot(slot);
  double standoff = 1e-3 * m.delta();
  for (double pole : {m.xi0(), m.xi1()}) {
    if (std::abs(xi - pole) < standoff) {
      // Evaluate at the standoff point on the supported side.
      double probe_in = pole == m.xi0() ? pole + standoff : pole - standoff;
      double probe_out = pole == m.xi0() ? pole - standoff : pole + standoff;
      double probe = on_support(m, slot, probe_in) ? probe_in : probe_out;
      return {pushforward_density(m, w, weighting, slot, probe), ApproxTag::NearSingular};
    }
  }
  if (!on_support(m, slot, xi)) return {0.0, ApproxTag::OffSupport};
  return {pushforward_density(m, w, weighting, slot, xi), ApproxTag::Interior};
}

}  // namespace

Approximation asym_indicator(const TwoHarmonicModel& model, const GaussianWindow& window, double alpha, double radius,
                             TimeSlot slot, double xi) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be > 0");
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be > 0");
  Approximation out = tagged_density(model, window, Weighting::Indicator, slot, xi);
  if (out.tag == ApproxTag::Interior && model.a() > 0.0) {
    // The single preimage must fall inside [-R, R].
    double u = std::abs((xi - model.xi0()) / (xi - model.xi1()));
    double eta_star = eta_avg(model, window) + std::log(u) / (2.0 * window.C() * model.delta());
    if (std::abs(eta_star) > radius) return {0.0, ApproxTag::OffSupport};
  }
  return out;
}

Approximation asym_sst(const TwoHarmonicModel& model, const GaussianWindow& window, double alpha, TimeSlot slot,
                       double xi) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be > 0");
  return tagged_density(model, window, Weighting::Stft, slot, xi);
}

bool PreimageIntervals::contains(double eta) const {
  for (const auto& iv : intervals)
    if (eta > iv.lo && eta < iv.hi) return true;
  return false;
}

IntervalLabel interval_label(const TwoHarmonicModel& model, double half_width, double xi) {
  const double c = half_width;
  if (xi < model.xi0() - c) return IntervalLabel::I1;
  if (xi < model.xi0() + c) return IntervalLabel::I2;
  if (xi < model.xibar() - c) return IntervalLabel::I3;
  if (xi < model.xibar() + c) return IntervalLabel::I4;
  if (xi < model.xi1() - c) return IntervalLabel::I5;
  if (xi < model.xi1() + c) return IntervalLabel::I6;
  return IntervalLabel::I7;
}

PreimageIntervals preimage_intervals(const TwoHarmonicModel& model, const GaussianWindow& window, double alpha,
                                     double c_multiple, TimeSlot slot, double xi) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be > 0");
  if (model.a() <= 0.0) throw Error(ErrorKind::DegenerateAmplitude, "preimage segmentation needs a > 0");
  const double d = model.delta();
  const double limit = (slot.kind == SlotKind::Intermediate ? 0.5 : 0.25) * d / std::sqrt(alpha);
  if (!(c_multiple > 0.0) || c_multiple > limit * (1.0 + 1e-12))
    throw Error(ErrorKind::Precondition, "C = " + num(c_multiple) + " outside (0, " + num(limit) + "]");
  const double half = c_multiple * std::sqrt(alpha);
  const double avg = eta_avg(model, window);
  const double rate = 2.0 * window.C() * d;

  PreimageIntervals out{interval_label(model, half, xi), {}, avg, half};
  // eta_s = xi0 + delta w; the window |eta_s - xi| < half is w in (w_lo, w_hi).
  const double w_lo = (xi - half - model.xi0()) / d;
  const double w_hi = (xi + half - model.xi0()) / d;

  switch (slot.kind) {
    case SlotKind::Constructive: {
      // w = q/(1+q) in (0, 1), increasing; eta = avg + ln(w/(1-w))/rate
      double lo = std::max(w_lo, 0.0), hi = std::min(w_hi, 1.0);
      if (lo < hi) {
        auto eta_of = [&](double w) {
          if (w <= 0.0) return -kInf;
          if (w >= 1.0) return kInf;
          return avg + std::log(w / (1.0 - w)) / rate;
        };
        out.intervals.push_back({eta_of(lo), eta_of(hi)});
      }
      break;
    }
    case SlotKind::Destructive: {
      // q = -u; w < 0 for u < 1 and w > 1 for u > 1, decreasing in eta on each branch;
      // eta = avg + ln(w/(w-1))/rate
      auto eta_of = [&](double w) {
        if (w == 0.0) return -kInf;
        if (w == 1.0) return kInf;
        if (std::isinf(w)) return avg;
        return avg + std::log(w / (w - 1.0)) / rate;
      };
      if (w_lo < 0.0) {
        double top = std::min(w_hi, 0.0);
        out.intervals.push_back({eta_of(top), eta_of(w_lo)});
      }
      if (w_hi > 1.0) {
        double bottom = std::max(w_lo, 1.0);
        out.intervals.push_back({eta_of(w_hi), eta_of(bottom)});
      }
      break;
    }
    case SlotKind::Intermediate: {
      // |eta_s - xi|^2 = (xi - xi0)^2 - 2 delta y (xi - xibar), y = p^2/(1+p^2) in (0, 1),
      // eta = avg + ln(y/(1-y))/(2 rate)
      double lead = (xi - model.xi0()) * (xi - model.xi0());
      double slope = 2.0 * d * (xi - model.xibar());
      double lo = 0.0, hi = 1.0;
      if (slope > 0.0) {
        lo = std::max(lo, (lead - half * half) / slope);
      } else if (slope < 0.0) {
        hi = std::min(hi, (lead - half * half) / slope);
      } else if (lead >= half * half) {
        hi = lo;
      }
      if (lo < hi) {
        auto eta_of = [&](double y) {
          if (y <= 0.0) return -kInf;
          if (y >= 1.0) return kInf;
          return avg + std::log(y / (1.0 - y)) / (2.0 * rate);
        };
        out.intervals.push_back({eta_of(lo), eta_of(hi)});
      }
      break;
    }
  }
  for (auto it = out.intervals.begin(); it != out.intervals.end();)
    it = (it->lo < it->hi) ? it + 1 : out.intervals.erase(it);
  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const EtaInterval& x, const EtaInterval& y) { return x.lo < y.lo; });
  return out;
}

double erf_closed_form(const TwoHarmonicModel& model, const GaussianWindow& window, double alpha, TimeSlot slot,
                       double xi) {
  require_extreme_slot(slot);
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be > 0");
  if (model.a() <= 0.0) throw Error(ErrorKind::DegenerateAmplitude, "erf forms need a > 0");
  const double d = model.delta(), a = model.a(), ps = kPi * window.sigma();
  const double half = d / 4.0;  // C sqrt(alpha) with C = delta / (4 sqrt(alpha))
  const bool constructive = slot.kind == SlotKind::Constructive;
  // Log arguments of the two boundary frequencies; constructive times carry an extra minus sign.
  auto gamma = [&](int which) {
    double shift = which == 1 ? half : -half;
    double arg = (constructive ? -1.0 : 1.0) / a * (1.0 + d / (xi - model.xi1() + shift));
    if (!(arg > 0.0) || !std::isfinite(arg))
      throw Error(ErrorKind::OutOfBranch, std::string("gamma_") + (which == 1 ? "1" : "2") +
                                              " log argument is not positive at xi=" + num(xi));
    return model.xibar() + std::log(arg) / (2.0 * window.C() * d);
  };
  // Second component enters with the sign of cos(2 pi delta t).
  const double b = constructive ? a : -a;
  auto erf_pair = [&](double g) { return std::erf(ps * (g - model.xi0())) + b * std::erf(ps * (g - model.xi1())); };
  const double lower_tail = 1.0 + b;  // value of erf_pair at +infinity; -lower_tail at -infinity

  double bracket = 0.0;
  switch (interval_label(model, half, xi)) {
    case IntervalLabel::I1:
    case IntervalLabel::I7:
      bracket = constructive ? 0.0 : erf_pair(gamma(1)) - erf_pair(gamma(2));
      break;
    case IntervalLabel::I2:
      bracket = lower_tail + erf_pair(gamma(constructive ? 1 : 2));
      break;
    case IntervalLabel::I6:
      bracket = lower_tail - erf_pair(gamma(constructive ? 2 : 1));
      break;
    default:
      bracket = constructive ? erf_pair(gamma(1)) - erf_pair(gamma(2)) : 0.0;
      break;
  }
  return std::abs(bracket) / (2.0 * ps * std::sqrt(alpha));
}

namespace {

struct BracketTerms {
  double f1, f2, scale1, scale2;
  bool valid;
};

// First and second xi-derivatives of the constructive-time erf bracket, without the common
// positive factor, together with the magnitudes used to normalise them.
BracketTerms bracket_derivatives(double a, const GaussianWindow& w, double delta, double offset) {
  const double c = w.C();
  double s1 = offset - 0.75 * delta;
  double s2 = offset - 1.25 * delta;
  if (!(s1 > -delta && s1 < 0.0 && s2 > -delta && s2 < 0.0)) return {0, 0, 0, 0, false};
  auto g = [&](double s) { return 0.5 * delta + std::log(-(1.0 + delta / s) / a) / (2.0 * c * delta); };
  auto gp = [&](double s) { return -1.0 / (2.0 * c * s * (s + delta)); };
  auto gpp = [&](double s) { return (2.0 * s + delta) / (2.0 * c * s * s * (s + delta) * (s + delta)); };
  double g1 = g(s1), g2 = g(s2);  // measured from xi0
  double g1p = gp(s1), g2p = gp(s2), g1pp = gpp(s1), g2pp = gpp(s2);
  double e1 = std::exp(-c * g1 * g1), e2 = std::exp(-c * g2 * g2);
  double e3 = std::exp(-c * (g1 - delta) * (g1 - delta)), e4 = std::exp(-c * (g2 - delta) * (g2 - delta));
  double f1 = g1p * (e1 + a * e3) - g2p * (e2 + a * e4);
  double sc1 = std::abs(g1p) * (e1 + a * e3) + std::abs(g2p) * (e2 + a * e4);
  double t1 = g1pp * (e1 + a * e3);
  double t2 = 2.0 * c * g1p * g1p * (g1 * e1 + a * (g1 - delta) * e3);
  double t3 = g2pp * (e2 + a * e4);
  double t4 = 2.0 * c * g2p * g2p * (g2 * e2 + a * (g2 - delta) * e4);
  double f2 = t1 - t2 - t3 + t4;
  double sc2 = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4);
  return {f1, f2, sc1, sc2, sc1 > 0.0 && sc2 > 0.0};
}

}  // namespace

DoubleRootResidual sst_double_root_residual(double a, const GaussianWindow& window, double delta, double offset) {
  if (!(a > 0.0)) throw Error(ErrorKind::InvalidArgument, "a must be > 0");
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta must be > 0");
  BracketTerms b = bracket_derivatives(a, window, delta, offset);
  if (!b.valid) throw Error(ErrorKind::OutOfBranch, "offset must lie in (delta/4, 3 delta/4)");
  return {b.f1 / b.scale1, b.f2 / b.scale2};
}

SstCriticalGap critical_gap_sst(double a, const GaussianWindow& window) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::InvalidArgument, "a must be > 0");
  const double ps = kPi * window.sigma();
  const double closed_delta = std::sqrt(2.0 * std::log(3.0) / 3.0) / ps;
  if (a == 1.0) return {closed_delta, 1.0 / 3.0, 0.5 * closed_delta, 0.0, 0};

  // Unknowns: x = (theta, log delta) with offset = delta (1/4 + theta/2), theta in (0, 1).
  auto residual = [&](double amp, double theta, double log_delta, std::array<double, 2>& r) {
    double delta = std::exp(log_delta);
    if (!(theta > 0.0 && theta < 1.0)) return false;
    BracketTerms b = bracket_derivatives(amp, window, delta, delta * (0.25 + 0.5 * theta));
    if (!b.valid) return false;
    r = {b.f1 / b.scale1, b.f2 / b.scale2};
    return std::isfinite(r[0]) && std::isfinite(r[1]);
  };
  auto norm2 = [](const std::array<double, 2>& r) { return std::hypot(r[0], r[1]); };

  double theta = 0.5, log_delta = std::log(closed_delta);
  int total_iters = 0;
  double last_res = 0.0;
  // Continuation in log a from the balanced case.
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(std::log(a)) / 0.05)));
  for (int step = 1; step <= steps; ++step) {
    double amp = std::exp(std::log(a) * step / steps);
    std::array<double, 2> r{};
    if (!residual(amp, theta, log_delta, r))
      throw Error(ErrorKind::SolverFailure, "continuation left the admissible region at a=" + num(amp));
    for (int it = 0; it < 60 && norm2(r) > 1e-13; ++it, ++total_iters) {
      const double h = 1e-7;
      std::array<double, 2> rt{}, rd{};
      double ht = theta + h < 1.0 ? h : -h;
      if (!residual(amp, theta + ht, log_delta, rt) || !residual(amp, theta, log_delta + h, rd))
        throw Error(ErrorKind::SolverFailure, "Jacobian probe left the admissible region at a=" + num(amp));
      double j11 = (rt[0] - r[0]) / ht, j21 = (rt[1] - r[1]) / ht;
      double j12 = (rd[0] - r[0]) / h, j22 = (rd[1] - r[1]) / h;
      double det = j11 * j22 - j12 * j21;
      if (det == 0.0 || !std::isfinite(det)) throw Error(ErrorKind::SolverFailure, "singular Jacobian at a=" + num(amp));
      double dth = -(j22 * r[0] - j12 * r[1]) / det;
      double dld = -(-j21 * r[0] + j11 * r[1]) / det;
      double lambda = 1.0;
      bool moved = false;
      for (int half = 0; half < 40; ++half, lambda *= 0.5) {
        std::array<double, 2> trial{};
        if (residual(amp, theta + lambda * dth, log_delta + lambda * dld, trial) && norm2(trial) < norm2(r)) {
          theta += lambda * dth;
          log_delta += lambda * dld;
          r = trial;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    last_res = norm2(r);
    if (!(last_res < 1e-9))
      throw Error(ErrorKind::SolverFailure, "Newton stalled at a=" + num(amp) + " with residuals (" + num(r[0]) + ", " +
                                                num(r[1]) + ")");
  }
  double delta = std::exp(log_delta);
  double offset = delta * (0.25 + 0.5 * theta);
  BracketTerms b = bracket_derivatives(a, window, delta, offset);
  (void)b;
  const double c = window.C();
  double s1 = offset - 0.75 * delta, s2 = offset - 1.25 * delta;
  double g1 = 0.5 * delta + std::log(-(1.0 + delta / s1) / a) / (2.0 * c * delta);
  double g2 = 0.5 * delta + std::log(-(1.0 + delta / s2) / a) / (2.0 * c * delta);
  double ratio = std::exp(-c * (g1 * g1 - g2 * g2));
  return {delta, ratio, offset, last_res, total_iters};
}

cplx single_component_squeeze(const TwoHarmonicModel& model, const GaussianWindow& window, double alpha, double t,
                              double xi, int component) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be > 0");
  if (component != 0 && component != 1) throw Error(ErrorKind::InvalidArgument, "component must be 0 or 1");
  double freq = component == 0 ? model.xi0() : model.xi1();
  double amp = component == 0 ? 1.0 : model.a();
  double d = freq - xi;
  return amp / (kPi * window.sigma() * std::sqrt(alpha)) * std::polar(std::exp(-d * d / alpha), 2.0 * kPi * freq * t);
}

cplx sst_extreme_amplitude(const TwoHarmonicModel& model, const GaussianWindow& window, double alpha, double t,
                           double xi, AmplitudeRegime regime) {
  return single_component_squeeze(model, window, alpha, t, xi, regime == AmplitudeRegime::SmallA ? 0 : 1);
}

}  // namespace tfi
