#pragma once

// Umbrella header: planar 3-DOF leg kinematics, minimum-jerk planning, the
// six IK methods, the training pipeline, metrics, and the benchmark harness.

#include "legik/bench.hpp"
#include "legik/config.hpp"
#include "legik/csv.hpp"
#include "legik/kinematics.hpp"
#include "legik/metrics.hpp"
#include "legik/model.hpp"
#include "legik/neural.hpp"
#include "legik/rng.hpp"
#include "legik/settings.hpp"
#include "legik/solvers/analytical.hpp"
#include "legik/solvers/barrier.hpp"
#include "legik/solvers/ccd.hpp"
#include "legik/solvers/common.hpp"
#include "legik/solvers/lmdls.hpp"
#include "legik/solvers/mooga.hpp"
#include "legik/solvers/mppi.hpp"
#include "legik/svgplot.hpp"
#include "legik/trajectory.hpp"
