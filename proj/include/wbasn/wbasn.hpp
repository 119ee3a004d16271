#pragma once

#include "wbasn/types.hpp"
#include "wbasn/energy.hpp"
#include "wbasn/rng.hpp"
#include "wbasn/world.hpp"
#include "wbasn/thermal.hpp"
#include "wbasn/routing.hpp"
#include "wbasn/mobility.hpp"
#include "wbasn/tdma.hpp"
#include "wbasn/engine.hpp"
#include "wbasn/config_io.hpp"
#include "wbasn/csv.hpp"
#include "wbasn/cli.hpp"
