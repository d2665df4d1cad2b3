#pragma once

#include <functional>
#include <vector>

#include "tfi/model.hpp"

namespace tfi {

enum class FieldTag { Stft, Reassign, Squeeze };

struct ComplexField {
  TFGrid grid;
  std::vector<cplx> values;
  FieldTag tag = FieldTag::Stft;

  cplx at(int i_t, int j_eta) const { return values[static_cast<std::size_t>(i_t) * grid.n_eta + j_eta]; }
};

struct RealField {
  TFGrid grid;
  std::vector<double> values;

  double at(int i_t, int j_eta) const { return values[static_cast<std::size_t>(i_t) * grid.n_eta + j_eta]; }
};

using SignalFn = std::function<cplx(double)>;

// Composite 16-point Gauss-Legendre over [t - W, t + W], W = half_width_sigmas * sigma.
struct QuadratureSpec {
  double half_width_sigmas = 8.0;
  int panels = 128;
};

// Modified STFT: integral of f(x) h(x - t) e^{-2 pi i eta (x - t)} dx.
cplx stft_closed_form(const TwoHarmonicModel& model, const GaussianWindow& window, double t,
                      double eta);

struct StftPartials {
  cplx value;
  cplx d_t;
  cplx d_eta;
};

StftPartials stft_partials(const TwoHarmonicModel& model, const GaussianWindow& window, double t,
                           double eta);

cplx stft_numeric(const SignalFn& signal, const GaussianWindow& window, double t, double eta,
                  const QuadratureSpec& quad = {}, WindowKind kind = WindowKind::Gaussian);

struct SpectrogramTerms {
  double g0;
  double g1;
  double cross;
  double sum() const { return g0 + g1 + cross; }
};

SpectrogramTerms spectrogram_decomposition(const TwoHarmonicModel& model,
                                           const GaussianWindow& window, double t, double eta);

// Uniform bound on | |V| - (|V0| + |V1|) |.
double separation_gap_bound(const TwoHarmonicModel& model, const GaussianWindow& window);

// B f(z) = (1/(sigma sqrt(pi))) integral f(x) exp(-x^2/sigma^2 + 2xz/sigma - z^2/2) dx, closed form.
cplx bargmann_transform(const TwoHarmonicModel& model, const GaussianWindow& window, cplx z);
// V rebuilt from the Bargmann transform at z = t/sigma - i pi sigma eta.
cplx bargmann_reconstruct(const TwoHarmonicModel& model, const GaussianWindow& window, double t,
                          double eta);
double bargmann_consistency(const TwoHarmonicModel& model, const GaussianWindow& window, double t,
                            double eta);

ComplexField stft_field(const TwoHarmonicModel& model, const GaussianWindow& window,
                        const TFGrid& grid);

}  // namespace tfi
