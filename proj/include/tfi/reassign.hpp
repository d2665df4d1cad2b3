#pragma once

#include <vector>

#include "tfi/gabor.hpp"

namespace tfi {

// Extended complex plane value with an explicit point at infinity.
struct ExtendedComplex {
  bool infinite = false;
  cplx value{};

  static ExtendedComplex finite(cplx z) { return {false, z}; }
  static ExtendedComplex infinity() { return {true, {}}; }
};

// M(z) = (xi0 + xi1 z) / (1 + z)
struct MobiusMap {
  double xi0;
  double xi1;

  MobiusMap(double xi0, double xi1);
  ExtendedComplex apply(ExtendedComplex z) const;
  ExtendedComplex apply(cplx z) const { return apply(ExtendedComplex::finite(z)); }
};

// Reassigned frequency; at_zero marks the zero-of-V sentinel.
struct ReassignValue {
  cplx value;
  bool at_zero;
};

// q = a e^{2 pi i delta t} e^{2 C delta (eta - xibar)}
cplx reassign_ratio(const TwoHarmonicModel& model, const GaussianWindow& window, double t,
                    double eta);

ReassignValue eta_s(const TwoHarmonicModel& model, const GaussianWindow& window, double t,
                    double eta);
double eta_p(const TwoHarmonicModel& model, const GaussianWindow& window, double t, double eta);

// |d/deta eta_s|, used to size quadrature panels.
double eta_s_gradient(const TwoHarmonicModel& model, const GaussianWindow& window, double t,
                      double eta);

// Imaginary correction a delta e^{-C((eta-xi0)^2+(eta-xi1)^2)} sin(2 pi delta t) / |V|^2.
double eta_s_imag_closed_form(const TwoHarmonicModel& model, const GaussianWindow& window,
                              double t, double eta);

struct AttractionCheck {
  double bound;
  double actual;
  bool holds;
};

AttractionCheck attraction_bound_check(const TwoHarmonicModel& model,
                                       const GaussianWindow& window, double t, double eta);

struct Circle {
  cplx center;
  double radius;
};

Circle arc_circle(const TwoHarmonicModel& model, double theta);

double ahm_reassign_error_bound(const AHMSignal& signal, const GaussianWindow& window, double t,
                                double t_star, double beta, double c_h, double c_dh);

// eta - (1/(2 pi i)) V^{(h')} / V^{(h)} by quadrature.
ReassignValue eta_s_numeric(const SignalFn& signal, const GaussianWindow& window, double t,
                            double eta, const QuadratureSpec& quad = {});

enum class ReassignMode { Sync, Phase };

struct ReassignField {
  TFGrid grid;
  std::vector<cplx> values;
  std::vector<unsigned char> at_zero;
  ReassignMode mode = ReassignMode::Sync;
};

ReassignField reassign_field(const TwoHarmonicModel& model, const GaussianWindow& window,
                             const TFGrid& grid, ReassignMode mode);

}  // namespace tfi
