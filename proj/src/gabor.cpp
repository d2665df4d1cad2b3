#include "tfi/gabor.hpp"

#include <cmath>
#include <sstream>

#include "cycles.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "tfi/errors.hpp"

namespace tfi {

cplx stft_closed_form(const TwoHarmonicModel& model, const GaussianWindow& window, double t, double eta) {
  const double c = window.C();
  double d0 = eta - model.xi0(), d1 = eta - model.xi1();
  cplx bracket = std::exp(-c * d0 * d0) + model.a() * detail::turn(model.delta() * t) * std::exp(-c * d1 * d1);
  return detail::turn(model.xi0() * t) * bracket;
}

StftPartials stft_partials(const TwoHarmonicModel& model, const GaussianWindow& window, double t, double eta) {
  const double c = window.C();
  double d0 = eta - model.xi0(), d1 = eta - model.xi1();
  cplx first = detail::turn(model.xi0() * t, std::exp(-c * d0 * d0));
  cplx second = model.a() * detail::turn(model.xi1() * t, std::exp(-c * d1 * d1));
  const cplx two_pi_i(0.0, 2.0 * kPi);
  return {first + second, two_pi_i * (model.xi0() * first + model.xi1() * second),
          -2.0 * c * (d0 * first + d1 * second)};
}

cplx stft_numeric(const SignalFn& signal, const GaussianWindow& window, double t, double eta,
                  const QuadratureSpec& quad, WindowKind kind) {
  if (!(quad.half_width_sigmas > 0.0) || quad.panels < 1)
    throw Error(ErrorKind::InvalidArgument, "quadrature needs a positive half-width and panel count");
  const double w = quad.half_width_sigmas * window.sigma();
  auto integrand = [&](double x) -> cplx {
    cplx fx = signal(x);
    if (!std::isfinite(fx.real()) || !std::isfinite(fx.imag())) {
      std::ostringstream os;
      os.precision(17);
      os << "signal sample at x=" << x << " is not finite";
      throw Error(ErrorKind::NonFinite, os.str());
    }
    double u = x - t;
    double wv = kind == WindowKind::Gaussian ? window.value(u) : window.derivative(u);
    return fx * wv * std::polar(1.0, -2.0 * kPi * eta * u);
  };
  return detail::gauss_legendre_panels(integrand, t - w, t + w, quad.panels);
}

SpectrogramTerms spectrogram_decomposition(const TwoHarmonicModel& model, const GaussianWindow& window, double t,
                                           double eta) {
  const double c = window.C();
  double d0 = eta - model.xi0(), d1 = eta - model.xi1();
  double a = model.a();
  return {std::exp(-2.0 * c * d0 * d0), a * a * std::exp(-2.0 * c * d1 * d1),
          2.0 * a * std::exp(-c * (d0 * d0 + d1 * d1)) * detail::turn(model.delta() * t).real()};
}

double separation_gap_bound(const TwoHarmonicModel& model, const GaussianWindow& window) {
  double half = model.delta() / 2.0;
  return 2.0 * model.a() * std::exp(-window.C() * half * half);
}

cplx bargmann_transform(const TwoHarmonicModel& model, const GaussianWindow& window, cplx z) {
  // For a pure tone e^{2 pi i xi x} the Gaussian integral gives exp((z + i pi sigma xi)^2 - z^2/2).
  const double s = window.sigma();
  auto tone = [&](double xi) {
    cplx w = z + cplx(0.0, kPi * s * xi);
    return std::exp(w * w - z * z / 2.0);
  };
  return tone(model.xi0()) + model.a() * tone(model.xi1());
}

cplx bargmann_reconstruct(const TwoHarmonicModel& model, const GaussianWindow& window, double t, double eta) {
  const double s = window.sigma();
  double u = t / s, v = kPi * s * eta;
  cplx z(u, -v);
  // The modified STFT needs e^{+i pi t eta}; the opposite sign belongs to the unmodified transform.
  return std::exp(-0.5 * (u * u + v * v)) * std::polar(1.0, kPi * t * eta) * bargmann_transform(model, window, z);
}

double bargmann_consistency(const TwoHarmonicModel& model, const GaussianWindow& window, double t, double eta) {
  return std::abs(bargmann_reconstruct(model, window, t, eta) - stft_closed_form(model, window, t, eta));
}

ComplexField stft_field(const TwoHarmonicModel& model, const GaussianWindow& window, const TFGrid& grid) {
  grid.validate();
  ComplexField field{grid, std::vector<cplx>(grid.size()), FieldTag::Stft};
  detail::parallel_for(static_cast<std::size_t>(grid.n_t), [&](std::size_t i) {
    double t = grid.t_at(static_cast<int>(i));
    for (int j = 0; j < grid.n_eta; ++j)
      field.values[i * grid.n_eta + j] = stft_closed_form(model, window, t, grid.eta_at(j));
  });
  return field;
}

}  // namespace tfi
