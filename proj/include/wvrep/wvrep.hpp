#pragma once

#include "config.hpp"
#include "entanglement.hpp"
#include "link_physics.hpp"
#include "mode_space.hpp"
#include "model_params.hpp"
#include "monte_carlo.hpp"
#include "repeater.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "sweep.hpp"
