#pragma once

#include <utility>
#include <vector>

#include "tfi/gabor.hpp"

namespace tfi {

struct FrequencyBand {
  double lo;
  double hi;
};

// [xi0 - 4/(pi sigma), xi1 + 4/(pi sigma)]
FrequencyBand default_band(const TwoHarmonicModel& model, const GaussianWindow& window);

// Refined local maxima of eta -> |V(t, eta)|, resolution-checked.
std::vector<double> frequency_maxima(const TwoHarmonicModel& model, const GaussianWindow& window,
                                     double t, FrequencyBand band, int n_samples = 1024);

int count_frequency_maxima(const TwoHarmonicModel& model, const GaussianWindow& window, double t,
                           FrequencyBand band, int n_samples = 1024);

struct StftCriticalGap {
  double delta_crit;
  double s;
};

StftCriticalGap critical_gap_stft(double a, const GaussianWindow& window);

struct BifurcationTimes {
  double t_left;
  double t_right;
};

BifurcationTimes bifurcation_times(const TwoHarmonicModel& model, const GaussianWindow& window,
                                   int k);

struct EllipseParams {
  double center_t;
  double center_eta;
  double semi_axis_eta;
  double semi_axis_t;
  int k;
};

EllipseParams bubble_ellipse(const TwoHarmonicModel& model, const GaussianWindow& window, int k);

// Line integral of |d/deta |V|^2| along the predicted bubble ellipse.
double ellipse_residual(const TwoHarmonicModel& model, const GaussianWindow& window, int k,
                        int n_arc = 1024);

struct DestructiveExtrema {
  double eta_avg;
  double eta_minus;
  double eta_plus;
  double minus_gap_bound;  // bound on xi0 - eta_minus
  double plus_gap_bound;   // bound on eta_plus - xi1
  bool bounds_hold;
};

DestructiveExtrema destructive_extrema(const TwoHarmonicModel& model, const GaussianWindow& window,
                                       int k);

struct RidgePoint {
  double t;
  double eta;
};

struct RidgeReport {
  std::vector<RidgePoint> points;
  std::vector<std::pair<double, int>> maxima_count_per_t;
  std::vector<double> bifurcation_times;
  std::vector<EllipseParams> ellipses;
};

RidgeReport extract_ridges(const ComplexField& field);

}  // namespace tfi
