// Randomized and swept checks of structural identities across modules.
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tfi/tfi.hpp"

using namespace tfi;

namespace {

struct Sampler {
  std::mt19937_64 rng{20240611};
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  TwoHarmonicModel model() { return TwoHarmonicModel(uniform(0.5, 2.0), uniform(0.1, 1.0), uniform(0.2, 3.0)); }
  GaussianWindow window() { return GaussianWindow(uniform(0.7, 2.0)); }
};

double gauss(const GaussianWindow& w, double x) { return std::exp(-w.C() * x * x); }

}  // namespace

TEST_CASE("signal modulus bound and constructive equality") {
  Sampler s;
  for (int n = 0; n < 50; ++n) {
    TwoHarmonicModel m = s.model();
    for (int i = 0; i < 20; ++i) CHECK(std::abs(evaluate_two_harmonic(m, s.uniform(-20, 20))) <= 1.0 + m.a() + 1e-12);
    // Phase of the first component is 2 pi xi0 k/delta; only the modulus is fixed.
    for (int k = -2; k <= 2; ++k)
      CHECK(std::abs(evaluate_two_harmonic(m, constructive_time(m, k))) == doctest::Approx(1.0 + m.a()).epsilon(1e-9));
    CHECK(destructive_time(m, 3) - constructive_time(m, 3) == doctest::Approx(0.5 / m.delta()).epsilon(1e-15));
  }
}

TEST_CASE("freeze round trip and bound structure") {
  Sampler s;
  for (int n = 0; n < 30; ++n) {
    TwoHarmonicModel m = s.model();
    FrozenAHM f = freeze_ahm(lift_two_harmonic(m), s.uniform(-5, 5));
    CHECK(f.model.xi0() == doctest::Approx(m.xi0()).epsilon(1e-14));
    CHECK(f.model.delta() == doctest::Approx(m.delta()).epsilon(1e-12));
    CHECK(f.model.a() == doctest::Approx(m.a()).epsilon(1e-14));
  }
  GaussianWindow w(1.3);
  auto make = [](double eps) {
    AHMComponent c0{[](double) { return 1.0; }, [](double x) { return x; }, [](double) { return 1.0; }, 0.4};
    AHMComponent c1{[](double) { return 0.7; }, [](double x) { return 1.5 * x; }, [](double) { return 1.5; }, 0.9};
    return AHMSignal({c0, c1}, eps);
  };
  for (double tau : {0.0, 0.3, 1.7, 4.0}) {
    double b = ahm_stft_error_bound(make(1e-3), w, 2.0 + tau, 2.0);
    CHECK(b >= 0.0);
    CHECK(b == doctest::Approx(ahm_stft_error_bound(make(1e-3), w, 2.0 - tau, 2.0)));
    CHECK(ahm_stft_error_bound(make(3e-3), w, 2.0 + tau, 2.0) == doctest::Approx(3.0 * b));
  }
}

TEST_CASE("triangle sandwich, modulation covariance and periodicity") {
  Sampler s;
  for (int n = 0; n < 20; ++n) {
    TwoHarmonicModel m = s.model();
    GaussianWindow w = s.window();
    // The uniform gap bound is only asserted for a >= 1; below that it can be exceeded.
    double bound = separation_gap_bound(m, w);
    double shift = s.uniform(-1, 1);
    TwoHarmonicModel moved(m.xi0() + shift, m.delta(), m.a());
    for (int i = 0; i < 40; ++i) {
      double t = s.uniform(-10, 10), eta = s.uniform(m.xi0() - 1.0, m.xi1() + 1.0);
      double v0 = gauss(w, eta - m.xi0()), v1 = m.a() * gauss(w, eta - m.xi1());
      double v = std::abs(stft_closed_form(m, w, t, eta));
      CHECK(v <= v0 + v1 + 1e-12);
      CHECK(v >= v0 + v1 - 2.0 * std::min(v0, v1) - 1e-12);
      if (m.a() >= 1.0) CHECK(v0 + v1 - v <= bound + 1e-12);
      CHECK(std::abs(std::abs(stft_closed_form(moved, w, t, eta + shift)) - v) <= 1e-12);
      CHECK(std::abs(std::abs(stft_closed_form(m, w, t + 1.0 / m.delta(), eta)) - v) <= 1e-12);
    }
  }
}

TEST_CASE("two maxima at every time above the critical gap") {
  GaussianWindow w(std::sqrt(2.0));
  for (double a : {0.5, 1.0, 2.0}) {
    double crit = critical_gap_stft(a, w).delta_crit;
    TwoHarmonicModel m(1.0, 1.05 * crit, a);
    for (int i = 0; i < 24; ++i) {
      double t = i / (24.0 * m.delta());
      CHECK(count_frequency_maxima(m, w, t, default_band(m, w)) == 2);
    }
  }
}

TEST_CASE("balanced counts follow the bifurcation times") {
  GaussianWindow w(std::sqrt(2.0));
  TwoHarmonicModel m(1.0, 0.25, 1.0);
  const double period = 1.0 / m.delta();
  for (int k = 0; k < 2; ++k) {
    BifurcationTimes b = bifurcation_times(m, w, k);
    BifurcationTimes prev = bifurcation_times(m, w, k - 1);
    for (double frac : {0.0, 0.5, 1.0}) {
      double inside = b.t_left + 0.01 * period + frac * (b.t_right - b.t_left - 0.02 * period);
      CHECK(count_frequency_maxima(m, w, inside, default_band(m, w)) == 2);
      double outside = prev.t_right + 0.01 * period + frac * (b.t_left - prev.t_right - 0.02 * period);
      CHECK(count_frequency_maxima(m, w, outside, default_band(m, w)) == 1);
    }
  }
}

TEST_CASE("eta_avg is the only zero on a destructive slice") {
  GaussianWindow w(std::sqrt(2.0));
  TwoHarmonicModel m(1.0, 0.3, 1.3);
  double t = destructive_time(m, 1), e0 = eta_avg(m, w);
  for (int j = 0; j < 4001; ++j) {
    double eta = 0.0 + 2.5 * j / 4000.0;
    if (std::abs(eta - e0) > 1e-6) CHECK(std::abs(stft_closed_form(m, w, t, eta)) > 0.0);
  }
}

TEST_CASE("balanced ridges are mirror symmetric") {
  GaussianWindow w(std::sqrt(2.0));
  TwoHarmonicModel m(1.0, 0.3, 1.0);
  // Symmetric eta range around xibar so mirrored samples coincide.
  TFGrid g{0.0, 1.0 / 0.3, 61, 1.15 - 0.6, 1.15 + 0.6, 241};
  RidgeReport r = extract_ridges(stft_field(m, w, g));
  for (const auto& p : r.points) {
    double mirror = 2.0 * 1.15 - p.eta;
    double best = 1e9;
    for (const auto& q : r.points)
      if (q.t == p.t) best = std::min(best, std::abs(q.eta - mirror));
    CHECK(best <= g.eta_step());
  }
}

TEST_CASE("reassignment identities on random points") {
  Sampler s;
  for (int n = 0; n < 20; ++n) {
    TwoHarmonicModel m = s.model();
    GaussianWindow w = s.window();
    MobiusMap map(m.xi0(), m.xi1());
    for (int i = 0; i < 30; ++i) {
      double t = s.uniform(-5, 5), eta = s.uniform(m.xi0() - 0.5, m.xi1() + 0.5);
      ReassignValue v = eta_s(m, w, t, eta);
      if (v.at_zero) continue;
      CHECK(std::abs(eta_p(m, w, t, eta) - v.value.real()) <= 1e-9 * (1.0 + std::abs(v.value)));
      ExtendedComplex z = map.apply(reassign_ratio(m, w, t, eta));
      REQUIRE_FALSE(z.infinite);
      CHECK(std::abs(z.value - v.value) <= 1e-14 * std::abs(v.value) * 4.0);
    }
    for (int k = -1; k <= 1; ++k) {
      double eta = s.uniform(m.xi0() - 0.5, m.xi1() + 0.5);
      CHECK(std::abs(eta_s(m, w, constructive_time(m, k), eta).value.imag()) <= 1e-12);
      ReassignValue d = eta_s(m, w, destructive_time(m, k), eta);
      if (!d.at_zero) CHECK(std::abs(d.value.imag()) <= 1e-12 * (1.0 + std::abs(d.value)));
    }
  }
}

TEST_CASE("reassignment ranges at distinguished times") {
  GaussianWindow w(std::sqrt(2.0));
  TwoHarmonicModel m(1.0, 0.3, 1.3);
  double e0 = eta_avg(m, w);
  double prev = -1e300;
  for (int j = 0; j < 2000; ++j) {
    double eta = e0 - 0.5 + 1.0 * j / 1999.0;
    double plus = eta_s(m, w, constructive_time(m, 0), eta).value.real();
    CHECK(plus > m.xi0());
    CHECK(plus < m.xi1());
    CHECK(plus > prev);
    prev = plus;
    ReassignValue minus = eta_s(m, w, destructive_time(m, 0), eta);
    if (!minus.at_zero) CHECK((minus.value.real() < m.xi0() || minus.value.real() > m.xi1()));
  }
}

TEST_CASE("winding is stable under resolution and radius changes") {
  GaussianWindow w(std::sqrt(2.0));
  Sampler s;
  for (int n = 0; n < 5; ++n) {
    TwoHarmonicModel m(1.0, s.uniform(0.2, 0.8), s.uniform(0.5, 2.0));
    TFGrid region{0.0, 2.0 / m.delta(), 81, m.xi0() - 1.0, m.xi1() + 1.0, 81};
    auto zeros = locate_zeros(m, w, region);
    CHECK(zeros.size() == 2);
    double rho = default_winding_radius(w);
    for (const auto& z : zeros) {
      CHECK(z.winding == 1);
      CHECK(winding_number(m, w, z, rho, 512) == 1);
      CHECK(winding_number(m, w, z, rho / 2.0) == 1);
    }
  }
}

TEST_CASE("squeezed mass concentrates on the predicted side") {
  GaussianWindow w(std::sqrt(2.0));
  TwoHarmonicModel m(1.0, 0.3, 1.0);
  SqueezeConfig cfg;
  cfg.alpha = 1e-4;
  cfg.quad.base_panels = 512;
  const double edge = 3.0 * std::sqrt(cfg.alpha);
  const double h = std::sqrt(cfg.alpha) / 2.0;
  std::vector<double> xis;
  for (double xi = m.xi0() - 0.3; xi <= m.xi1() + 0.3; xi += h) xis.push_back(xi);
  auto fractions = [&](double t) {
    std::vector<cplx> vals = squeeze_cross_section(m, w, cfg, t, xis);
    double total = 0.0, outside = 0.0, inside = 0.0;
    for (std::size_t i = 0; i < xis.size(); ++i) {
      double v = std::abs(vals[i]) * h;
      total += v;
      if (xis[i] <= m.xi0() - edge || xis[i] >= m.xi1() + edge) outside += v;
      if (xis[i] > m.xi0() + edge && xis[i] < m.xi1() - edge) inside += v;
    }
    return std::pair{outside / total, inside / total};
  };
  CHECK(fractions(constructive_time(m, 0)).first < 1e-6);
  CHECK(fractions(destructive_time(m, 0)).second < 1e-6);
}

TEST_CASE("critical gaps are ordered") {
  GaussianWindow w(std::sqrt(2.0));
  double sst = critical_gap_sst(1.0, w).delta_crit;
  double stft = critical_gap_stft(1.0, w).delta_crit;
  CHECK(sst < stft);
  CHECK(std::abs(sst / stft - std::sqrt(std::log(3.0) / 3.0)) <= 1e-9);
}
