#pragma once

#include "agrosim/cli.hpp"
#include "agrosim/config.hpp"
#include "agrosim/control.hpp"
#include "agrosim/csv.hpp"
#include "agrosim/disturbance.hpp"
#include "agrosim/dynamics.hpp"
#include "agrosim/errors.hpp"
#include "agrosim/integrator.hpp"
#include "agrosim/presets.hpp"
#include "agrosim/sim.hpp"
#include "agrosim/svg.hpp"
#include "agrosim/types.hpp"
