#pragma once

#include <cstdint>

#include "sipgrey/run_log.hpp"
#include "sipgrey/scenario.hpp"

namespace sipgrey {

// Runs one scenario under one seed to quiescence (or the horizon) and
// returns the complete log. Deterministic: the same scenario and seed give
// a bit-identical log.
RunLog run_scenario(const Scenario& scenario, std::uint64_t seed);

}  // namespace sipgrey
