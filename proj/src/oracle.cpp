#include "tfi/oracle.hpp"

#include <cmath>

#include "tfi/errors.hpp"

// Nothing here calls into gabor, reassign or squeeze numerics; every formula is restated.

namespace tfi {

OracleReport& OracleReport::compare(cplx primary) {
  agreement = std::abs(value - primary);
  return *this;
}

OracleReport oracle_stft(const SignalFn& signal, const GaussianWindow& window, double t, double eta, double step,
                         double half_width_sigmas) {
  if (!(step > 0.0) || !(half_width_sigmas > 0.0))
    throw Error(ErrorKind::InvalidArgument, "oracle step and half-width must be positive");
  const double sigma = window.sigma();
  const double w = half_width_sigmas * sigma;
  const long n = static_cast<long>(std::ceil(2.0 * w / step));
  const double norm = 1.0 / (sigma * std::sqrt(kPi));
  cplx sum = 0.0;
  for (long i = 0; i < n; ++i) {
    double u = -w + i * step;
    double x = t + u;
    double g = norm * std::exp(-(u * u) / (sigma * sigma));
    sum += signal(x) * g * cplx(std::cos(2.0 * kPi * eta * u), -std::sin(2.0 * kPi * eta * u));
  }
  OracleReport rep;
  rep.name = "stft-riemann";
  rep.inputs = {{"t", t}, {"eta", eta}, {"sigma", sigma}};
  rep.value = sum * step;
  rep.resolution = {{"step", step}, {"half_width", w}, {"nodes", static_cast<double>(n)}};
  return rep;
}

namespace {

// A run of equal samples that rises then falls counts once.
int strict_maxima(const std::vector<double>& s, std::size_t stride) {
  int count = 0;
  for (std::size_t i = stride; i + stride < s.size(); i += stride) {
    if (!(s[i] > s[i - stride])) continue;
    std::size_t e = i;
    while (e + stride < s.size() && s[e + stride] == s[i]) e += stride;
    if (e + stride < s.size() && s[e + stride] < s[i]) ++count;
    i = e;
  }
  return count;
}

}  // namespace

int oracle_maxima_count(const std::vector<double>& samples) {
  if (samples.size() < 512) throw Error(ErrorKind::InvalidArgument, "maxima oracle needs >= 512 samples");
  int full = strict_maxima(samples, 1);
  int half = strict_maxima(samples, 2);
  if (full != half)
    throw Error(ErrorKind::Inconclusive,
                "maxima count differs between resolutions (" + std::to_string(full) + " vs " + std::to_string(half) + ")");
  return full;
}

OracleReport oracle_quadrature_squeeze(const TwoHarmonicModel& model, const GaussianWindow& window,
                                       const SqueezeConfig& config, double t, double xi, int nodes) {
  if (nodes < 16) throw Error(ErrorKind::InvalidArgument, "oracle needs at least 16 nodes");
  const double sigma = window.sigma();
  const double decay = kPi * kPi * sigma * sigma;
  const double x0 = model.xi0(), x1 = model.xi0() + model.delta(), amp = model.a();
  double lo, hi;
  if (config.weighting == Weighting::Stft) {
    lo = x0 - 10.0 / (kPi * sigma);
    hi = x1 + 10.0 / (kPi * sigma);
  } else {
    lo = -config.radius;
    hi = config.radius;
  }
  const double h = (hi - lo) / nodes;
  const double alpha = config.alpha;
  const double kernel_norm = 1.0 / std::sqrt(kPi * alpha);
  cplx sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    double eta = lo + (i + 0.5) * h;
    // Each component separately: value and time derivative.
    cplx e0 = std::exp(cplx(-decay * (eta - x0) * (eta - x0), 2.0 * kPi * x0 * t));
    cplx e1 = amp * std::exp(cplx(-decay * (eta - x1) * (eta - x1), 2.0 * kPi * x1 * t));
    cplx v = e0 + e1;
    if (std::abs(v) < 1e-300) continue;
    cplx dv = cplx(0.0, 2.0 * kPi) * (x0 * e0 + x1 * e1);
    cplx reassigned = dv / (cplx(0.0, 2.0 * kPi) * v);
    if (config.mode == ReassignMode::Phase) reassigned = reassigned.real();
    cplx diff = reassigned - xi;
    double g = kernel_norm * std::exp(-std::norm(diff) / alpha);
    cplx weight = config.weighting == Weighting::Stft ? v : cplx(1.0);
    sum += weight * g;
  }
  OracleReport rep;
  rep.name = "squeeze-midpoint";
  rep.inputs = {{"t", t}, {"xi", xi}, {"alpha", alpha}, {"a", amp}, {"delta", model.delta()}, {"sigma", sigma}};
  rep.value = sum * h;
  rep.resolution = {{"nodes", static_cast<double>(nodes)}, {"lo", lo}, {"hi", hi}};
  return rep;
}

}  // namespace tfi
