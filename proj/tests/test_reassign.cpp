#include <doctest.h>

#include <cmath>

#include "tfi/errors.hpp"
#include "tfi/reassign.hpp"

using namespace tfi;

namespace {

const GaussianWindow kWindow(std::sqrt(2.0));

}  // namespace

TEST_CASE("mobius map") {
  MobiusMap m(1.0, 1.3);
  CHECK(m.apply(cplx(0.0)).value == cplx(1.0));
  CHECK(m.apply(cplx(1.0)).value.real() == doctest::Approx(1.15));
  cplx quarter = m.apply(std::polar(1.0, M_PI / 2.0)).value;
  CHECK(quarter.real() == doctest::Approx(1.15));
  CHECK(quarter.imag() == doctest::Approx(0.15));
  for (double th : {0.3, 1.0, 2.5}) {
    cplx g = m.apply(std::polar(1.0, th)).value;
    CHECK(std::abs(g - cplx(1.15, 0.15 * std::tan(th / 2.0))) < 1e-12);
  }
  CHECK(m.apply(cplx(-1.0)).infinite);
  ExtendedComplex at_inf = m.apply(ExtendedComplex::infinity());
  CHECK_FALSE(at_inf.infinite);
  CHECK(at_inf.value == cplx(1.3));
  CHECK_THROWS_AS(MobiusMap(1.0, 1.0), Error);
}

TEST_CASE("eta_s basics") {
  TwoHarmonicModel single(1.0, 0.3, 0.0);
  for (double t : {0.0, 1.1}) CHECK(eta_s(single, kWindow, t, 0.7).value == cplx(1.0));
  TwoHarmonicModel m(1.0, 0.3, 1.3);
  // Distance to xi1 is delta / |1 + q|, tiny once q is large.
  CHECK(std::abs(eta_s(m, kWindow, 0.4, 5.0).value - cplx(1.3)) < 1e-15);
  CHECK(std::abs(eta_s(m, kWindow, 0.4, 3.0).value - cplx(1.3)) < std::abs(eta_s(m, kWindow, 0.4, 2.0).value - cplx(1.3)));
  ReassignValue zero = eta_s(m, kWindow, destructive_time(m, 0), eta_avg(m, kWindow));
  CHECK(zero.at_zero);
}

TEST_CASE("eta_s against a finite-difference time derivative") {
  TwoHarmonicModel m(1.0, 0.3, 1.3);
  const double h = 1e-6;
  for (double t : {0.2, 0.9, 2.6})
    for (double eta : {0.8, 1.1, 1.45}) {
      cplx v = stft_closed_form(m, kWindow, t, eta);
      cplx fd = (stft_closed_form(m, kWindow, t + h, eta) - stft_closed_form(m, kWindow, t - h, eta)) /
                (2.0 * h * v * cplx(0.0, 2.0 * M_PI));
      cplx es = eta_s(m, kWindow, t, eta).value;
      CHECK(std::abs(fd - es) <= 1e-6 * std::abs(es));
    }
}

TEST_CASE("eta_s by quadrature") {
  TwoHarmonicModel m(1.0, 0.3, 1.3);
  SignalFn f = [&](double x) { return evaluate_two_harmonic(m, x); };
  for (double t : {0.3, 1.2})
    for (double eta : {0.9, 1.2}) {
      ReassignValue num = eta_s_numeric(f, kWindow, t, eta);
      CHECK_FALSE(num.at_zero);
      CHECK(std::abs(num.value - eta_s(m, kWindow, t, eta).value) < 1e-7);
    }
}

TEST_CASE("eta_p and the imaginary correction") {
  TwoHarmonicModel single(1.0, 0.3, 0.0);
  CHECK(eta_p(single, kWindow, 0.7, 1.4) == doctest::Approx(1.0));
  TwoHarmonicModel m(1.0, 0.3, 1.3);
  for (int k = 0; k < 3; ++k)
    for (double eta : {0.8, 1.1, 1.5}) {
      double tp = constructive_time(m, k);
      cplx s = eta_s(m, kWindow, tp, eta).value;
      CHECK(s.imag() == 0.0);
      CHECK(eta_p(m, kWindow, tp, eta) == doctest::Approx(s.real()).epsilon(1e-12));
    }
  for (double t : {0.3, 1.1, 2.9})
    for (double eta : {0.8, 1.1, 1.5}) {
      cplx s = eta_s(m, kWindow, t, eta).value;
      CHECK(std::abs(s.imag() - eta_s_imag_closed_form(m, kWindow, t, eta)) < 1e-10);
      CHECK(std::abs(eta_p(m, kWindow, t, eta) - s.real()) < 1e-11);
    }
  try {
    eta_p(m, kWindow, destructive_time(m, 0), eta_avg(m, kWindow));
    FAIL("expected phase-undefined");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PhaseUndefined);
  }
}

TEST_CASE("gradient matches finite differences") {
  TwoHarmonicModel m(1.0, 0.3, 1.3);
  const double h = 1e-6, t = 0.8, eta = 1.07;
  cplx fd = (eta_s(m, kWindow, t, eta + h).value - eta_s(m, kWindow, t, eta - h).value) / (2.0 * h);
  CHECK(eta_s_gradient(m, kWindow, t, eta) == doctest::Approx(std::abs(fd)).epsilon(1e-6));
}

TEST_CASE("attraction bound") {
  TwoHarmonicModel bal(1.0, 0.15, 1.0);
  // At eta = xi0 the premise evaluates to about 0.80, above the 1/2 threshold.
  try {
    attraction_bound_check(bal, kWindow, 0.0, 1.0);
    FAIL("expected not-applicable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotApplicable);
  }
  double eta = 1.0 - 0.3;
  for (int i = 0; i < 40; ++i) {
    double t = i / (40.0 * 0.15);
    AttractionCheck c = attraction_bound_check(bal, kWindow, t, eta);
    CHECK(c.holds);
    CHECK(c.actual <= c.bound);
  }
  TwoHarmonicModel tiny(1.0, 0.15, 1e-9);
  AttractionCheck c = attraction_bound_check(tiny, kWindow, 0.3, 1.0);
  CHECK(c.bound < 1e-9);
  CHECK(c.actual < 1e-9);
}

TEST_CASE("arc circles") {
  TwoHarmonicModel m(1.0, 0.3, 1.3);
  Circle quarter = arc_circle(m, M_PI / 2.0);
  CHECK(std::abs(quarter.center - cplx(1.15, 0.0)) < 1e-12);
  CHECK(quarter.radius == doctest::Approx(0.15));
  // Circumradius (delta^2 + y^2) / (2 y) with y = delta tan(0.005): about 50 delta.
  Circle flat = arc_circle(m, 0.01);
  double y = 0.15 * std::tan(0.005);
  CHECK(flat.radius == doctest::Approx((0.15 * 0.15 + y * y) / (2.0 * y)));
  CHECK(flat.radius > 49.0 * 0.3);
  CHECK(flat.center.real() == doctest::Approx(1.15));

  Circle c1 = arc_circle(m, 1.0);
  MobiusMap map(m.xi0(), m.xi1());
  for (int i = 0; i <= 40; ++i) {
    double r = 0.1 * std::pow(100.0, i / 40.0);
    cplx z = map.apply(std::polar(r, 1.0)).value;
    CHECK(std::abs(std::abs(z - c1.center) - c1.radius) < 1e-10);
  }
  CHECK_THROWS_AS(arc_circle(m, 0.0), Error);
  CHECK_THROWS_AS(arc_circle(m, M_PI), Error);
}

TEST_CASE("ahm reassignment bound") {
  AHMComponent low{[](double) { return 1.0; }, [](double x) { return x; }, [](double) { return 1.0; }, 0.0};
  AHMComponent high{[](double) { return 1.2; }, [](double x) { return 1.4 * x; }, [](double) { return 1.4; }, 0.0};
  AHMSignal harmonic({low, high}, 0.0);
  CHECK(ahm_reassign_error_bound(harmonic, kWindow, 0.0, 0.0, 0.25, 1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(ahm_reassign_error_bound(harmonic, kWindow, 0.0, 0.0, 0.5, 1.0, 1.0), Error);

  // Linear phase: freezing is exact, the two rules agree.
  FrozenAHM frozen = freeze_ahm(harmonic, 0.0);
  SignalFn f = [&](double x) { return harmonic(x); };
  for (double eta : {0.9, 1.2}) {
    ReassignValue num = eta_s_numeric(f, kWindow, 0.0, eta);
    ReassignValue lin = eta_s(frozen.model, kWindow, -frozen.time_shift, eta);
    CHECK(std::abs(num.value - lin.value) < 1e-7);
  }

  const double eps = 1e-3, beta = 0.25, t_star = 5.0;
  AHMComponent chirp{[](double) { return 1.2; }, [](double x) { return 1.4 * x + 2.5e-4 * x * x; },
                     [](double x) { return 1.4 + 5e-4 * x; }, 5e-4 / eps};
  AHMSignal s({low, chirp}, eps);
  FrozenAHM fz = freeze_ahm(s, t_star);
  double c_h = 0.0, c_dh = 0.0;
  for (double t : {t_star - 1.0, t_star, t_star + 1.0}) {
    c_h = std::max(c_h, ahm_window_error_bound(s, kWindow, t, t_star, WindowKind::Gaussian) / eps);
    c_dh = std::max(c_dh, ahm_window_error_bound(s, kWindow, t, t_star, WindowKind::GaussianDerivative) / eps);
  }
  double bound = ahm_reassign_error_bound(s, kWindow, t_star, t_star, beta, c_h, c_dh);
  SignalFn g = [&](double x) { return s(x); };
  int checked = 0;
  for (double t : {t_star - 1.0, t_star, t_star + 1.0})
    for (double eta : {0.8, 1.0, 1.2, 1.4, 1.6}) {
      double local = t - t_star - fz.time_shift;
      if (std::abs(stft_closed_form(fz.model, kWindow, local, eta)) < std::pow(eps, beta)) continue;
      double diff = std::abs(eta_s_numeric(g, kWindow, t, eta).value - eta_s(fz.model, kWindow, local, eta).value);
      CHECK(diff <= bound);
      ++checked;
    }
  CHECK(checked > 5);
}

TEST_CASE("reassign field") {
  TwoHarmonicModel m(1.0, 0.3, 1.3);
  double e0 = eta_avg(m, kWindow);
  TFGrid g{0.0, 2.0 / 0.6, 3, e0 - 0.2, e0 + 0.2, 3};
  ReassignField sync = reassign_field(m, kWindow, g, ReassignMode::Sync);
  ReassignField ph = reassign_field(m, kWindow, g, ReassignMode::Phase);
  CHECK(sync.at_zero[4] == 1);
  CHECK(ph.at_zero[4] == 1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i != 4) CHECK(sync.at_zero[i] == 0);
    CHECK(ph.values[i].imag() == 0.0);
    if (!sync.at_zero[i]) CHECK(ph.values[i].real() == sync.values[i].real());
  }
}
