#pragma once

#include <vector>

#include "tfi/reassign.hpp"

namespace tfi {

enum class Weighting { Stft, Indicator };

struct SqueezeQuadrature {
  int base_panels = 4096;
  double rel_tol = 1e-10;
  int max_depth = 48;
};

struct SqueezeConfig {
  double alpha = 1e-4;
  Weighting weighting = Weighting::Stft;
  double radius = 0.0;  // indicator support [-R, R]
  SqueezeQuadrature quad{};
  ReassignMode mode = ReassignMode::Sync;

  void validate(const TwoHarmonicModel& model, const GaussianWindow& window) const;
};

// min(1/alpha, e^{c/(2 alpha)}) with c = min_distance^2, floored at the support requirement.
double indicator_radius_default(const TwoHarmonicModel& model, const GaussianWindow& window,
                                double alpha, double min_distance);

// g_alpha(z) = (pi alpha)^{-1/2} e^{-|z|^2/alpha}
double mollifier(double alpha, cplx z);

cplx squeeze_transform(const TwoHarmonicModel& model, const GaussianWindow& window,
                       const SqueezeConfig& config, double t, double xi);

struct SqueezeCheck {
  cplx value;
  cplx doubled;
  double rel_change;
};

// Reruns with twice the base panels and reports the relative change.
SqueezeCheck squeeze_transform_checked(const TwoHarmonicModel& model, const GaussianWindow& window,
                                       const SqueezeConfig& config, double t, double xi);

std::vector<cplx> squeeze_cross_section(const TwoHarmonicModel& model,
                                        const GaussianWindow& window, const SqueezeConfig& config,
                                        double t, const std::vector<double>& xis);

ComplexField squeeze_field(const TwoHarmonicModel& model, const GaussianWindow& window,
                           const SqueezeConfig& config, const TFGrid& grid);

enum class SlotKind { Constructive, Destructive, Intermediate };

struct TimeSlot {
  SlotKind kind;
  int k = 0;
  double time(const TwoHarmonicModel& model) const;
};

enum class ApproxTag { Interior, OffSupport, NearSingular };

struct Approximation {
  cplx value;
  ApproxTag tag;
};

// Density of the weight pushed forward by eta_s at a constructive or destructive time.
cplx pushforward_density(const TwoHarmonicModel& model, const GaussianWindow& window,
                         Weighting weighting, TimeSlot slot, double xi);

Approximation asym_indicator(const TwoHarmonicModel& model, const GaussianWindow& window,
                             double alpha, double radius, TimeSlot slot, double xi);
Approximation asym_sst(const TwoHarmonicModel& model, const GaussianWindow& window, double alpha,
                       TimeSlot slot, double xi);

enum class IntervalLabel { I1 = 1, I2, I3, I4, I5, I6, I7 };

struct EtaInterval {
  double lo;  // may be -inf
  double hi;  // may be +inf
};

// Set of eta with |eta_s(t, eta) - xi| < C sqrt(alpha).
struct PreimageIntervals {
  IntervalLabel label;
  std::vector<EtaInterval> intervals;
  double eta_avg;
  double half_width;  // C sqrt(alpha)

  bool contains(double eta) const;
};

IntervalLabel interval_label(const TwoHarmonicModel& model, double half_width, double xi);

PreimageIntervals preimage_intervals(const TwoHarmonicModel& model, const GaussianWindow& window,
                                     double alpha, double c_multiple, TimeSlot slot, double xi);

// Box-kernel erf approximation of |S| with C = delta / (4 sqrt(alpha)).
double erf_closed_form(const TwoHarmonicModel& model, const GaussianWindow& window, double alpha,
                       TimeSlot slot, double xi);

struct SstCriticalGap {
  double delta_crit;
  double r;
  double xi_c;
  double residual;
  int iterations;
};

SstCriticalGap critical_gap_sst(double a, const GaussianWindow& window);

// The two conditions solved by critical_gap_sst: first and second xi-derivatives of the
// constructive-time erf bracket (up to positive factors), at gap delta and offset xi - xi0.
struct DoubleRootResidual {
  double first;
  double second;
};

DoubleRootResidual sst_double_root_residual(double a, const GaussianWindow& window, double delta,
                                            double offset);

enum class AmplitudeRegime { SmallA, LargeA };

// (a_j / (pi sigma sqrt(alpha))) e^{2 pi i xi_j t} e^{-(xi_j - xi)^2 / alpha}
cplx single_component_squeeze(const TwoHarmonicModel& model, const GaussianWindow& window,
                              double alpha, double t, double xi, int component);

cplx sst_extreme_amplitude(const TwoHarmonicModel& model, const GaussianWindow& window,
                           double alpha, double t, double xi, AmplitudeRegime regime);

}  // namespace tfi
