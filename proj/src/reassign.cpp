#include "tfi/reassign.hpp"

#include <cmath>
#include <limits>

#include "cycles.hpp"
#include "parallel.hpp"
#include "tfi/errors.hpp"

namespace tfi {

MobiusMap::MobiusMap(double xi0_, double xi1_) : xi0(xi0_), xi1(xi1_) {
  if (!(xi1 > xi0)) throw Error(ErrorKind::InvalidArgument, "Mobius map needs xi1 > xi0");
}

ExtendedComplex MobiusMap::apply(ExtendedComplex z) const {
  if (z.infinite) return ExtendedComplex::finite(xi1);
  if (z.value == cplx(-1.0, 0.0)) return ExtendedComplex::infinity();
  return ExtendedComplex::finite((xi0 + xi1 * z.value) / (1.0 + z.value));
}

namespace {

double log_ratio_modulus(const TwoHarmonicModel& m, const GaussianWindow& w, double eta) {
  return std::log(m.a()) + 2.0 * w.C() * m.delta() * (eta - m.xibar());
}

}  // namespace

cplx reassign_ratio(const TwoHarmonicModel& model, const GaussianWindow& window, double t, double eta) {
  if (model.a() == 0.0) return 0.0;
  return detail::turn(model.delta() * t, std::exp(log_ratio_modulus(model, window, eta)));
}

ReassignValue eta_s(const TwoHarmonicModel& model, const GaussianWindow& window, double t, double eta) {
  if (model.a() == 0.0) return {model.xi0(), false};
  double lq = log_ratio_modulus(model, window, eta);
  double cycles = model.delta() * t;
  if (lq <= 0.0) {
    cplx q = detail::turn(cycles, std::exp(lq));
    cplx denom = 1.0 + q;
    if (std::abs(denom) <= 1e-14) return {cplx(-std::numeric_limits<double>::infinity(), 0.0), true};
    return {model.xi0() + model.delta() * q / denom, false};
  }
  // Large |q|: expand around M(infinity) = xi1 with p = 1/q.
  cplx p = detail::turn(-cycles, std::exp(-lq));
  cplx denom = 1.0 + p;
  if (std::abs(denom) <= 1e-14) return {cplx(-std::numeric_limits<double>::infinity(), 0.0), true};
  return {model.xi1() - model.delta() * p / denom, false};
}

double eta_p(const TwoHarmonicModel& model, const GaussianWindow& window, double t, double eta) {
  // (1/2 pi) d/dt arg V as Im(conj(V) dV/dt) / (2 pi |V|^2), in the frame rotated by the common
  // carrier e^{2 pi i xi0 t} so only the relative phase is rounded.
  const double c = window.C();
  double d0 = eta - model.xi0(), d1 = eta - model.xi1();
  cplx low = std::exp(-c * d0 * d0);
  cplx high = detail::turn(model.delta() * t, model.a() * std::exp(-c * d1 * d1));
  cplx v = low + high;
  cplx dv = cplx(0.0, 2.0 * kPi) * (model.xi0() * low + model.xi1() * high);
  double mod2 = std::norm(v);
  if (std::sqrt(mod2) <= 1e-14 * (1.0 + model.a()))
    throw Error(ErrorKind::PhaseUndefined, "phase reassignment undefined at a zero of V");
  return (std::conj(v) * dv).imag() / (2.0 * kPi * mod2);
}

double eta_s_gradient(const TwoHarmonicModel& model, const GaussianWindow& window, double t, double eta) {
  if (model.a() == 0.0) return 0.0;
  double lq = log_ratio_modulus(model, window, eta);
  double cycles = model.delta() * t;
  // q/(1+q)^2 is invariant under q -> 1/q.
  cplx r = detail::turn(lq <= 0.0 ? cycles : -cycles, std::exp(-std::abs(lq)));
  cplx denom = (1.0 + r) * (1.0 + r);
  if (std::abs(denom) == 0.0) return std::numeric_limits<double>::infinity();
  double d = model.delta();
  return std::abs(2.0 * window.C() * d * d * r / denom);
}

double eta_s_imag_closed_form(const TwoHarmonicModel& model, const GaussianWindow& window, double t, double eta) {
  double c = window.C();
  double d0 = eta - model.xi0(), d1 = eta - model.xi1();
  double mod2 = std::norm(stft_closed_form(model, window, t, eta));
  return model.a() * model.delta() * std::exp(-c * (d0 * d0 + d1 * d1)) * detail::turn(model.delta() * t).imag() / mod2;
}

AttractionCheck attraction_bound_check(const TwoHarmonicModel& model, const GaussianWindow& window, double t,
                                       double eta) {
  double premise = model.a() * std::exp(window.C() * model.delta() * (eta - model.xibar()));
  if (!(premise <= 0.5)) throw Error(ErrorKind::NotApplicable, "attraction premise a e^{C delta (eta - xibar)} <= 1/2 fails");
  ReassignValue v = eta_s(model, window, t, eta);
  double bound = 2.0 * model.delta() * premise;
  double actual = v.at_zero ? std::numeric_limits<double>::infinity() : std::abs(v.value - model.xi0());
  return {bound, actual, actual <= bound};
}

Circle arc_circle(const TwoHarmonicModel& model, double theta) {
  if (!(theta > 0.0 && theta < kPi)) throw Error(ErrorKind::Domain, "theta must lie in (0, pi)");
  double half = model.delta() / 2.0;
  cplx p1(model.xi0(), 0.0), p2(model.xi1(), 0.0), p3(model.xibar(), half * std::tan(theta / 2.0));
  // Circumcentre of three points.
  double ax = p1.real(), ay = p1.imag(), bx = p2.real(), by = p2.imag(), cx = p3.real(), cy = p3.imag();
  double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
  double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  double ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
  double uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
  cplx center(ux, uy);
  return {center, std::abs(p1 - center)};
}

double ahm_reassign_error_bound(const AHMSignal& signal, const GaussianWindow& window, double t, double t_star,
                                double beta, double c_h, double c_dh) {
  (void)t;
  if (!(beta > 0.0 && beta < 0.5)) throw Error(ErrorKind::Domain, "beta must lie in (0, 1/2)");
  FrozenAHM frozen = freeze_ahm(signal, t_star);
  double a0 = std::abs(frozen.scale);
  double a = frozen.model.a();
  double constant = (c_dh + (1.0 + a) * (std::sqrt(2.0) / window.sigma()) * std::exp(-0.5) * c_h) / (kPi * a0);
  return constant * std::pow(signal.epsilon(), 1.0 - 2.0 * beta);
}

ReassignValue eta_s_numeric(const SignalFn& signal, const GaussianWindow& window, double t, double eta,
                            const QuadratureSpec& quad) {
  cplx v = stft_numeric(signal, window, t, eta, quad, WindowKind::Gaussian);
  if (std::abs(v) <= 1e-14) return {cplx(-std::numeric_limits<double>::infinity(), 0.0), true};
  cplx vd = stft_numeric(signal, window, t, eta, quad, WindowKind::GaussianDerivative);
  return {eta - vd / (cplx(0.0, 2.0 * kPi) * v), false};
}

ReassignField reassign_field(const TwoHarmonicModel& model, const GaussianWindow& window, const TFGrid& grid,
                             ReassignMode mode) {
  grid.validate();
  ReassignField out{grid, std::vector<cplx>(grid.size()), std::vector<unsigned char>(grid.size(), 0), mode};
  detail::parallel_for(static_cast<std::size_t>(grid.n_t), [&](std::size_t i) {
    double t = grid.t_at(static_cast<int>(i));
    for (int j = 0; j < grid.n_eta; ++j) {
      std::size_t idx = i * grid.n_eta + j;
      ReassignValue v = eta_s(model, window, t, grid.eta_at(j));
      out.at_zero[idx] = v.at_zero ? 1 : 0;
      out.values[idx] = (mode == ReassignMode::Phase) ? cplx(v.value.real(), 0.0) : v.value;
    }
  });
  return out;
}

}  // namespace tfi
