#pragma once

#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include "tfi/model.hpp"

namespace tfi::detail {

// r e^{2 pi i x} with exact argument reduction, so half-integer x gives a real result.
inline cplx turn(double x, double r = 1.0) {
  return {r * boost::math::cos_pi(2.0 * x), r * boost::math::sin_pi(2.0 * x)};
}

}  // namespace tfi::detail
