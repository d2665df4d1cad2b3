#include "tfi/model.hpp"

#include <cmath>
#include <sstream>

#include "tfi/errors.hpp"

namespace tfi {

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Maps x into (-1/2, 1/2].
double wrap_half(double x) {
  double r = x - std::floor(x);
  return r > 0.5 ? r - 1.0 : r;
}

}  // namespace

TwoHarmonicModel::TwoHarmonicModel(double xi0, double delta, double a) : xi0_(xi0), delta_(delta), a_(a) {
  if (!std::isfinite(xi0) || !std::isfinite(delta) || !std::isfinite(a))
    throw Error(ErrorKind::InvalidArgument, "model parameters must be finite");
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta must be > 0, got " + fmt_double(delta));
  if (!(a >= 0.0)) throw Error(ErrorKind::InvalidArgument, "a must be >= 0, got " + fmt_double(a));
}

GaussianWindow::GaussianWindow(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(ErrorKind::InvalidArgument, "sigma must be finite and > 0, got " + fmt_double(sigma));
}

double GaussianWindow::value(double x) const {
  double u = x / sigma_;
  return std::exp(-u * u) / (sigma_ * std::sqrt(kPi));
}

double GaussianWindow::derivative(double x) const {
  return -2.0 * x / (sigma_ * sigma_) * value(x);
}

void TFGrid::validate() const {
  if (!(t_min < t_max)) throw Error(ErrorKind::InvalidArgument, "grid requires t_min < t_max");
  if (!(eta_min < eta_max)) throw Error(ErrorKind::InvalidArgument, "grid requires eta_min < eta_max");
  if (n_t < 2 || n_eta < 2) throw Error(ErrorKind::InvalidArgument, "grid requires n_t >= 2 and n_eta >= 2");
}

double TFGrid::t_at(int i) const {
  return i == n_t - 1 ? t_max : t_min + i * t_step();
}

double TFGrid::eta_at(int j) const {
  return j == n_eta - 1 ? eta_max : eta_min + j * eta_step();
}

cplx evaluate_two_harmonic(const TwoHarmonicModel& model, double t) {
  return std::polar(1.0, 2.0 * kPi * model.xi0() * t) + model.a() * std::polar(1.0, 2.0 * kPi * model.xi1() * t);
}

double constructive_time(const TwoHarmonicModel& model, int k) { return k / model.delta(); }

double destructive_time(const TwoHarmonicModel& model, int k) { return (k + 0.5) / model.delta(); }

double intermediate_time(const TwoHarmonicModel& model, int k) { return (k + 0.25) / model.delta(); }

double eta_avg(const TwoHarmonicModel& model, const GaussianWindow& window) {
  if (model.a() <= 0.0) throw Error(ErrorKind::DegenerateAmplitude, "a = 0 has no destructive zero");
  return model.xibar() - std::log(model.a()) / (2.0 * window.C() * model.delta());
}

AHMSignal::AHMSignal(std::vector<AHMComponent> components, double epsilon)
    : components_(std::move(components)), epsilon_(epsilon) {
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be >= 0");
  for (const auto& c : components_) {
    if (!c.amplitude || !c.phase || !c.phase_derivative)
      throw Error(ErrorKind::InvalidArgument, "AHM component needs amplitude, phase and phase derivative");
    if (!(c.curvature_bound >= 0.0)) throw Error(ErrorKind::InvalidArgument, "curvature bound must be >= 0");
  }
}

cplx AHMSignal::operator()(double x) const {
  cplx sum = 0.0;
  for (const auto& c : components_) sum += c.amplitude(x) * std::polar(1.0, 2.0 * kPi * c.phase(x));
  return sum;
}

void AHMSignal::check_separation(double lo, double hi, int n, double min_gap) const {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "separation check needs n >= 2");
  for (int i = 0; i < n; ++i) {
    double x = lo + (hi - lo) * i / (n - 1);
    for (std::size_t k = 0; k < components_.size(); ++k) {
      double fk = components_[k].phase_derivative(x);
      if (!(fk > 0.0))
        throw Error(ErrorKind::ModelValidation,
                    "phase derivative of component " + std::to_string(k) + " not positive at t=" + fmt_double(x));
      if (k > 0) {
        double gap = fk - components_[k - 1].phase_derivative(x);
        if (gap < min_gap)
          throw Error(ErrorKind::ModelValidation,
                      "frequency separation " + fmt_double(gap) + " < " + fmt_double(min_gap) + " at t=" + fmt_double(x));
      }
    }
  }
}

AHMSignal lift_two_harmonic(const TwoHarmonicModel& model) {
  double xi0 = model.xi0(), xi1 = model.xi1(), a = model.a();
  std::vector<AHMComponent> comps(2);
  comps[0] = {[](double) { return 1.0; }, [xi0](double x) { return xi0 * x; }, [xi0](double) { return xi0; }, 0.0};
  comps[1] = {[a](double) { return a; }, [xi1](double x) { return xi1 * x; }, [xi1](double) { return xi1; }, 0.0};
  return AHMSignal(std::move(comps), 0.0);
}

FrozenAHM freeze_ahm(const AHMSignal& signal, double t_star) {
  const auto& comps = signal.components();
  if (comps.size() != 2)
    throw Error(ErrorKind::UnsupportedModel, "freezing needs exactly 2 components, got " + std::to_string(comps.size()));
  double amp0 = comps[0].amplitude(t_star), amp1 = comps[1].amplitude(t_star);
  if (amp0 == 0.0) throw Error(ErrorKind::DegenerateAmplitude, "A_0(t*) = 0");
  double f0 = comps[0].phase_derivative(t_star), f1 = comps[1].phase_derivative(t_star);
  if (!(f1 > f0)) throw Error(ErrorKind::ModelValidation, "frozen frequencies must satisfy xi1 > xi0");
  // Signed amplitudes become half-cycle phase offsets.
  double off0 = comps[0].phase(t_star) + (amp0 < 0.0 ? 0.5 : 0.0);
  double off1 = comps[1].phase(t_star) + (amp1 < 0.0 ? 0.5 : 0.0);
  double delta = f1 - f0;
  double shift = (amp1 == 0.0) ? 0.0 : wrap_half(off0 - off1) / delta;
  cplx scale = std::abs(amp0) * std::polar(1.0, 2.0 * kPi * (wrap_half(off0) + f0 * shift));
  return {TwoHarmonicModel(f0, delta, std::abs(amp1) / std::abs(amp0)), scale, shift};
}

namespace {

struct Moments {
  double m1, m2, m3;
};

// Moments of |x - t*| against |window(x - t)|, tau = t - t*.
Moments window_moments(double sigma, double tau, WindowKind kind) {
  double at = std::abs(tau);
  double sp = std::sqrt(kPi);
  if (kind == WindowKind::Gaussian) {
    // Last constant as printed (dimensionally it would be sigma^3 / sqrt(pi)).
    return {at + sigma / sp, tau * tau + sigma * sigma / 2.0,
            at * at * at + 3.0 * sigma / sp * tau * tau + 1.5 * sigma * sigma * at + sigma * sigma / sp};
  }
  double l1 = 2.0 / (sigma * sp);
  return {l1 * at + 1.0, l1 * tau * tau + 2.0 * at + 2.0 * sigma / sp,
          l1 * at * at * at + 3.0 * tau * tau + 6.0 * at * sigma / sp + 1.5 * sigma * sigma};
}

}  // namespace

double ahm_window_error_bound(const AHMSignal& signal, const GaussianWindow& window, double t, double t_star,
                              WindowKind kind) {
  const auto& comps = signal.components();
  if (comps.size() != 2)
    throw Error(ErrorKind::UnsupportedModel, "error bound needs exactly 2 components");
  double eps = signal.epsilon();
  Moments m = window_moments(window.sigma(), t - t_star, kind);
  double amplitude_part = 0.0, phase_part = 0.0;
  for (const auto& c : comps) {
    double fp = std::abs(c.phase_derivative(t_star));
    double mpp = c.curvature_bound;
    double aj = std::abs(c.amplitude(t_star));
    amplitude_part += fp * m.m1 + mpp / 2.0 * m.m2;
    phase_part += aj * (fp / 2.0 * m.m2 + mpp / 6.0 * m.m3);
  }
  return eps * amplitude_part + 2.0 * kPi * eps * phase_part;
}

double ahm_stft_error_bound(const AHMSignal& signal, const GaussianWindow& window, double t, double t_star) {
  return ahm_window_error_bound(signal, window, t, t_star, WindowKind::Gaussian);
}

}  // namespace tfi
