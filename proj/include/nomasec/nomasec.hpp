// Convenience header pulling in the whole library.
#pragma once

#include "beamforming.hpp"
#include "channel.hpp"
#include "experiments.hpp"
#include "link.hpp"
#include "montecarlo.hpp"
#include "optimizer.hpp"
#include "params.hpp"
#include "rng.hpp"
#include "scenario.hpp"
#include "secrecy_analytic.hpp"
#include "special_functions.hpp"
