#pragma once

#include "rdexp/ahlswede.hpp"
#include "rdexp/arimoto.hpp"
#include "rdexp/exponent_blahut.hpp"
#include "rdexp/grids.hpp"
#include "rdexp/info.hpp"
#include "rdexp/io.hpp"
#include "rdexp/kernel.hpp"
#include "rdexp/marton_inverse.hpp"
#include "rdexp/optimize.hpp"
#include "rdexp/oracle.hpp"
#include "rdexp/parallel.hpp"
#include "rdexp/rate_distortion.hpp"
#include "rdexp/simplex_grid.hpp"
#include "rdexp/simplex_lp.hpp"
#include "rdexp/types.hpp"
#include "rdexp/version.hpp"
