#pragma once

// Umbrella header for the survival-bandit sandbagging toolkit.

#include "sandbag/decimal.hpp"
#include "sandbag/detect.hpp"
#include "sandbag/errors.hpp"
#include "sandbag/io.hpp"
#include "sandbag/model.hpp"
#include "sandbag/policy.hpp"
#include "sandbag/rng.hpp"
#include "sandbag/sim.hpp"
#include "sandbag/solver.hpp"
#include "sandbag/svg.hpp"
#include "sandbag/theory.hpp"
