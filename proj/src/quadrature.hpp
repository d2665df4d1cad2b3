#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tfi/model.hpp"

namespace tfi::detail {

template <class F>
cplx gauss_legendre_panels(F&& f, double lo, double hi, int panels) {
  using Rule = boost::math::quadrature::gauss<double, 16>;
  const double width = (hi - lo) / panels;
  cplx total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double a = lo + p * width;
    double b = (p + 1 == panels) ? hi : a + width;
    total += Rule::integrate(f, a, b);
  }
  return total;
}

struct PanelEstimate {
  cplx value;
  double error;
};

// Single Gauss-Kronrod 15 panel, no subdivision.
template <class F>
PanelEstimate gauss_kronrod_panel(F&& f, double a, double b) {
  double err = 0.0;
  cplx v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
  return {v, err};
}

// Bisects until the Kronrod-Gauss difference is below abs_tol, or until splitting stops
// shrinking the estimate (roundoff floor).
template <class F>
cplx adaptive_refine(F&& f, double a, double b, const PanelEstimate& est, double abs_tol, int depth) {
  if (est.error <= abs_tol || depth <= 0) return est.value;
  double mid = 0.5 * (a + b);
  PanelEstimate left = gauss_kronrod_panel(f, a, mid);
  PanelEstimate right = gauss_kronrod_panel(f, mid, b);
  if (left.error + right.error > 0.5 * est.error) return left.value + right.value;
  return adaptive_refine(f, a, mid, left, 0.5 * abs_tol, depth - 1) +
         adaptive_refine(f, mid, b, right, 0.5 * abs_tol, depth - 1);
}

template <class F>
cplx adaptive_panel(F&& f, double a, double b, double abs_tol, int depth) {
  return adaptive_refine(f, a, b, gauss_kronrod_panel(f, a, b), abs_tol, depth);
}

}  // namespace tfi::detail
