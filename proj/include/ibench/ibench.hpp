#pragma once

#include "ibench/dataset.hpp"
#include "ibench/environment.hpp"
#include "ibench/errors.hpp"
#include "ibench/fatigue.hpp"
#include "ibench/harness.hpp"
#include "ibench/miscalibration.hpp"
#include "ibench/opcost.hpp"
#include "ibench/policy.hpp"
#include "ibench/random.hpp"
#include "ibench/serialization.hpp"
#include "ibench/setpoint.hpp"
#include "ibench/state.hpp"
#include "ibench/trajectory.hpp"
