#pragma once

#include <map>
#include <string>
#include <vector>

#include "tfi/gabor.hpp"
#include "tfi/squeeze.hpp"

namespace tfi {

struct OracleReport {
  std::string name;
  std::map<std::string, double> inputs;
  cplx value{};
  std::map<std::string, double> resolution;
  double agreement = 0.0;  // |value - primary|, filled by compare()

  OracleReport& compare(cplx primary);
};

// Left Riemann sum of the modified STFT at a fixed step.
OracleReport oracle_stft(const SignalFn& signal, const GaussianWindow& window, double t, double eta,
                         double step = 1e-4, double half_width_sigmas = 8.0);

// Strict maxima (a flat top counts once) on the samples and on every other sample; the two must agree.
int oracle_maxima_count(const std::vector<double>& samples);

// Midpoint rule over the truncated eta domain with a fixed node count.
OracleReport oracle_quadrature_squeeze(const TwoHarmonicModel& model, const GaussianWindow& window,
                                       const SqueezeConfig& config, double t, double xi,
                                       int nodes = 1 << 16);

}  // namespace tfi
