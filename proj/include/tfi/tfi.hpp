#pragma once

#include "tfi/errors.hpp"
#include "tfi/model.hpp"
#include "tfi/gabor.hpp"
#include "tfi/ridges.hpp"
#include "tfi/phasefield.hpp"
#include "tfi/reassign.hpp"
#include "tfi/squeeze.hpp"
#include "tfi/oracle.hpp"

namespace tfi {
inline constexpr const char* kVersion = "0.1.0";
}
