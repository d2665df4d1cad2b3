#pragma once

#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace tfi {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

// f(t) = e^{2 pi i xi0 t} + a e^{2 pi i xi1 t}, xi1 = xi0 + delta.
// a = 0 is accepted as the single-component limit.
class TwoHarmonicModel {
 public:
  TwoHarmonicModel(double xi0, double delta, double a);

  double xi0() const { return xi0_; }
  double delta() const { return delta_; }
  double a() const { return a_; }
  double xi1() const { return xi0_ + delta_; }
  double xibar() const { return xi0_ + 0.5 * delta_; }

 private:
  double xi0_;
  double delta_;
  double a_;
};

// h(x) = exp(-x^2/sigma^2) / (sigma sqrt(pi)), unit L1 norm.
class GaussianWindow {
 public:
  explicit GaussianWindow(double sigma);

  double sigma() const { return sigma_; }
  // pi^2 sigma^2, the decay rate of the window's Fourier transform.
  double C() const { return kPi * kPi * sigma_ * sigma_; }
  double value(double x) const;
  double derivative(double x) const;

 private:
  double sigma_;
};

// Uniform lattice, endpoints inclusive. Row-major storage is t-major.
struct TFGrid {
  double t_min = 0.0;
  double t_max = 1.0;
  int n_t = 2;
  double eta_min = 0.0;
  double eta_max = 1.0;
  int n_eta = 2;

  void validate() const;
  double t_at(int i) const;
  double eta_at(int j) const;
  double t_step() const { return (t_max - t_min) / (n_t - 1); }
  double eta_step() const { return (eta_max - eta_min) / (n_eta - 1); }
  std::size_t size() const { return static_cast<std::size_t>(n_t) * n_eta; }
};

cplx evaluate_two_harmonic(const TwoHarmonicModel& model, double t);

double constructive_time(const TwoHarmonicModel& model, int k);
double destructive_time(const TwoHarmonicModel& model, int k);
// (k + 1/4)/delta, where the cross term vanishes.
double intermediate_time(const TwoHarmonicModel& model, int k);

// Frequency of the spectrogram zero on a destructive slice.
double eta_avg(const TwoHarmonicModel& model, const GaussianWindow& window);

struct AHMComponent {
  std::function<double(double)> amplitude;
  std::function<double(double)> phase;  // in cycles: term is A e^{2 pi i phase}
  std::function<double(double)> phase_derivative;
  double curvature_bound = 0.0;
};

class AHMSignal {
 public:
  AHMSignal(std::vector<AHMComponent> components, double epsilon);

  cplx operator()(double x) const;
  const std::vector<AHMComponent>& components() const { return components_; }
  double epsilon() const { return epsilon_; }

  // Samples phi'_k - phi'_{k-1} >= min_gap on [lo, hi].
  void check_separation(double lo, double hi, int n, double min_gap) const;

 private:
  std::vector<AHMComponent> components_;
  double epsilon_;
};

AHMSignal lift_two_harmonic(const TwoHarmonicModel& model);

// F(x) ~ scale * f(x - t_star - time_shift) near t_star. time_shift absorbs the
// relative phase of the components so that a stays real; it is 0 when
// phi_0(t*) and phi_1(t*) are integers.
struct FrozenAHM {
  TwoHarmonicModel model;
  cplx scale;
  double time_shift;
};

FrozenAHM freeze_ahm(const AHMSignal& signal, double t_star);

enum class WindowKind { Gaussian, GaussianDerivative };

// Bound on |V_F(t,eta) - scale V_f(t - t*, eta)| as printed for the Gaussian window.
double ahm_stft_error_bound(const AHMSignal& signal, const GaussianWindow& window, double t,
                            double t_star);

// Same bound structure with the moments of |window| for either window kind.
// For WindowKind::Gaussian this equals ahm_stft_error_bound.
double ahm_window_error_bound(const AHMSignal& signal, const GaussianWindow& window, double t,
                              double t_star, WindowKind kind);

}  // namespace tfi
