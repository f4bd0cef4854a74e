#pragma once

#include "latfricke/experiments.hpp"

namespace latfricke::suites {

void validate(const ExperimentConfig& config);
ExperimentReport run(const ExperimentConfig& config);

}  // namespace latfricke::suites
