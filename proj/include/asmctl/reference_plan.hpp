#pragma once

#include "asmctl/plan.hpp"

namespace asmctl {

// The 12-stage, 7-part reference assembly: six placement checks alternating
// with six connection checks. Mirrored by data/reference_plan.json.
AssemblyPlan reference_plan();

}  // namespace asmctl
