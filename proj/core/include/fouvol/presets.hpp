#pragma once

// Calibrated two-state parameter sets (rho = -0.95, x0 = 0 fixed).

#include "fouvol/fou.hpp"

namespace fouvol::presets {

ModelParams spx_calibrated();
ModelParams vix_calibrated();
ModelParams joint_calibrated();

}  // namespace fouvol::presets
