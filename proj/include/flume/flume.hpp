/// Umbrella header: the whole library in one include.
#pragma once

#include "flume/cli.hpp"
#include "flume/config.hpp"
#include "flume/dynamics.hpp"
#include "flume/ensemble.hpp"
#include "flume/entropy.hpp"
#include "flume/fft.hpp"
#include "flume/gas_law.hpp"
#include "flume/grid.hpp"
#include "flume/heat.hpp"
#include "flume/noise.hpp"
#include "flume/quadrature.hpp"
#include "flume/rng.hpp"
#include "flume/snapshot.hpp"
#include "flume/state.hpp"
