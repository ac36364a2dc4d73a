#pragma once

/// Umbrella header: the whole library.

#include "stratum/analysis.hpp"
#include "stratum/constants.hpp"
#include "stratum/dsl.hpp"
#include "stratum/errors.hpp"
#include "stratum/expr.hpp"
#include "stratum/fuel.hpp"
#include "stratum/hahnbanach.hpp"
#include "stratum/level.hpp"
#include "stratum/metering.hpp"
#include "stratum/parser.hpp"
#include "stratum/polynomial.hpp"
#include "stratum/rational.hpp"
#include "stratum/real.hpp"
#include "stratum/topology.hpp"
