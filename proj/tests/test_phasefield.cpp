#include <doctest.h>

#include <cmath>

#include "tfi/errors.hpp"
#include "tfi/phasefield.hpp"

using namespace tfi;

namespace {

const GaussianWindow kWindow(std::sqrt(2.0));

double rotation(double freq, double t) {
  double r = std::fmod(2.0 * M_PI * freq * t, 2.0 * M_PI);
  return r < 0.0 ? r + 2.0 * M_PI : r;
}

double angle_gap(double x, double y) {
  double d = std::fmod(std::abs(x - y), 2.0 * M_PI);
  return std::min(d, 2.0 * M_PI - d);
}

}  // namespace

TEST_CASE("phase of simple configurations") {
  TwoHarmonicModel single(1.0, 0.5, 0.0);
  for (double t : {0.1, 0.7, 3.3}) {
    double p = phase(single, kWindow, t, 1.2);
    CHECK(p >= 0.0);
    CHECK(p < 2.0 * M_PI);
    CHECK(angle_gap(p, rotation(1.0, t)) < 1e-12);
  }
  TwoHarmonicModel bal(1.0, 0.3, 1.0);
  double t = constructive_time(bal, 2);
  CHECK(angle_gap(phase(bal, kWindow, t, 1.1), rotation(1.0, t)) < 1e-9);

  TwoHarmonicModel m(1.0, 0.3, 1.3);
  try {
    phase(m, kWindow, destructive_time(m, 0), eta_avg(m, kWindow));
    FAIL("expected phase-undefined");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PhaseUndefined);
  }
}

TEST_CASE("locate zeros") {
  TwoHarmonicModel m(1.0, 0.3, 1.3);
  TFGrid region{0.0, 7.0, 71, 0.5, 1.8, 66};
  ZeroSearchDiagnostics diag;
  auto zeros = locate_zeros(m, kWindow, region, &diag);
  REQUIRE(zeros.size() == 2);
  CHECK(zeros[0].t0 == doctest::Approx(1.0 / 0.6).epsilon(1e-9));
  CHECK(zeros[1].t0 == doctest::Approx(1.5 / 0.3).epsilon(1e-9));
  for (const auto& z : zeros) {
    CHECK(z.eta0 == doctest::Approx(1.127847).epsilon(1e-6));
    CHECK(z.refinement_residual <= 1e-9 * 2.3);
    CHECK(z.winding == 1);
    // Bargmann side vanishes at the same point.
    CHECK(std::abs(bargmann_reconstruct(m, kWindow, z.t0, z.eta0)) < 1e-9);
  }
  CHECK(diag.candidates >= 2);

  CHECK(locate_zeros(TwoHarmonicModel(1.0, 0.3, 0.0), kWindow, region).empty());
}

TEST_CASE("zero count follows destructive times") {
  TwoHarmonicModel m(1.0, 0.5, 0.8);
  TFGrid region{0.0, 9.0, 91, 0.2, 2.2, 41};
  auto zeros = locate_zeros(m, kWindow, region);
  int expected = 0;
  for (int k = 0; destructive_time(m, k) <= 9.0; ++k) ++expected;
  CHECK(static_cast<int>(zeros.size()) == expected);
}

TEST_CASE("winding numbers") {
  TwoHarmonicModel m(1.0, 0.3, 1.3);
  double t0 = destructive_time(m, 0), e0 = eta_avg(m, kWindow);
  double rho = default_winding_radius(kWindow);
  CHECK(rho == doctest::Approx(0.05 * std::min(std::sqrt(2.0), 1.0 / (M_PI * std::sqrt(2.0)))));

  WindingResult one = contour_winding(m, kWindow, t0, e0, rho);
  CHECK(one.winding == 1);
  CHECK(std::abs(one.raw - 1.0) < 0.01);
  CHECK(contour_winding(m, kWindow, t0, e0, rho, 512).winding == 1);
  CHECK(contour_winding(m, kWindow, t0, e0, rho / 2).winding == 1);

  ZeroPoint z{t0, e0, 1, 1.0, 0.0};
  CHECK(winding_number(m, kWindow, z, rho) == 1);

  // Zero free: shifted well off the zero in frequency.
  CHECK(contour_winding(m, kWindow, t0, e0 + 0.3, rho).winding == 0);

  // Both k = 0, 1 zeros enclosed.
  double mid = 0.5 * (destructive_time(m, 0) + destructive_time(m, 1));
  WindingResult two = contour_winding(m, kWindow, mid, e0, 2.5 / std::sqrt(2.0), 512);
  CHECK(two.winding == 2);

  CHECK_THROWS_AS(contour_winding(m, kWindow, t0 + rho * std::sqrt(2.0), e0, rho), Error);
}

TEST_CASE("phase fields") {
  TwoHarmonicModel single(1.0, 0.5, 0.0);
  TFGrid g{0.0, 2.0, 9, 0.5, 1.5, 11};
  ComplexField f = stft_field(single, kWindow, g);
  RealField awp = amplitude_weighted_phase(f);
  RealField ph = phase_field(f);
  for (int i = 0; i < g.n_t; ++i)
    for (int j = 0; j < g.n_eta; ++j) {
      double expected_phase = rotation(1.0, g.t_at(i));
      CHECK(angle_gap(ph.at(i, j), expected_phase) < 1e-12);
      CHECK(awp.at(i, j) == doctest::Approx(std::abs(f.at(i, j)) * ph.at(i, j)));
    }

  // Grid point sitting exactly on a zero gives 0.
  TwoHarmonicModel m(1.0, 0.3, 1.3);
  double e0 = eta_avg(m, kWindow);
  TFGrid through{0.0, 2.0 / 0.6, 3, e0 - 0.1, e0 + 0.1, 3};
  RealField w = amplitude_weighted_phase(stft_field(m, kWindow, through));
  CHECK(w.at(1, 1) == 0.0);
}

TEST_CASE("weighted phase has bounded jumps near a zero") {
  TwoHarmonicModel m(1.0, 0.3, 1.3);
  double t0 = destructive_time(m, 0), e0 = eta_avg(m, kWindow);
  TFGrid g{t0 - 0.5, t0 + 0.5, 41, e0 - 0.2, e0 + 0.2, 81};
  ComplexField f = stft_field(m, kWindow, g);
  RealField w = amplitude_weighted_phase(f);
  // Lipschitz estimate of |V| in eta from the closed-form partials.
  double lip = 0.0;
  for (int i = 0; i < g.n_t; ++i)
    for (int j = 0; j < g.n_eta; ++j)
      lip = std::max(lip, std::abs(stft_partials(m, kWindow, g.t_at(i), g.eta_at(j)).d_eta));
  // Column through the zero: the phase flips there, |V| is small on both sides.
  const int mid = g.n_t / 2;
  REQUIRE(g.t_at(mid) == doctest::Approx(t0));
  double worst = 0.0;
  for (int j = 1; j < g.n_eta; ++j) worst = std::max(worst, std::abs(w.at(mid, j) - w.at(mid, j - 1)));
  CHECK(worst <= g.eta_step() * lip * 2.0 * M_PI);
}
