#pragma once

#include <string>
#include <vector>

#include "tfi/gabor.hpp"

namespace tfi {

// Principal argument of V shifted to [0, 2 pi).
double phase(const TwoHarmonicModel& model, const GaussianWindow& window, double t, double eta);

struct ZeroPoint {
  double t0;
  double eta0;
  int winding;
  double winding_raw;  // before rounding
  double refinement_residual;
};

struct ZeroSearchDiagnostics {
  int candidates = 0;
  int dropped = 0;
  std::vector<std::string> notes;
};

std::vector<ZeroPoint> locate_zeros(const TwoHarmonicModel& model, const GaussianWindow& window,
                                    const TFGrid& region, ZeroSearchDiagnostics* diag = nullptr);

// 0.05 min(sigma, 1/(pi sigma))
double default_winding_radius(const GaussianWindow& window);

struct WindingResult {
  int winding;
  double raw;
  int evaluations;
};

// Winding of V along (t-t0)^2 + pi^2 sigma^4 (eta-eta0)^2 = (sigma rho)^2, traversed
// counterclockwise in z = t/sigma - i pi sigma eta, so a simple zero gives +1.
WindingResult contour_winding(const TwoHarmonicModel& model, const GaussianWindow& window,
                              double t0, double eta0, double rho, int n_samples = 256);

// Requires every other zero of V to sit at least 3 sigma rho from the centre.
int winding_number(const TwoHarmonicModel& model, const GaussianWindow& window,
                   const ZeroPoint& zero, double rho, int n_samples = 256);

RealField phase_field(const ComplexField& field);
RealField amplitude_weighted_phase(const ComplexField& field);

}  // namespace tfi
