#pragma once

#include "gausskey/commands.hpp"
#include "gausskey/config.hpp"
#include "gausskey/covariance.hpp"
#include "gausskey/error.hpp"
#include "gausskey/format.hpp"
#include "gausskey/numeric.hpp"
#include "gausskey/parallel.hpp"
#include "gausskey/protocol.hpp"
#include "gausskey/rate_region.hpp"
#include "gausskey/rng.hpp"
#include "gausskey/source_sim.hpp"
#include "gausskey/surrogate.hpp"
#include "gausskey/universal_hash.hpp"
