#pragma once

// umbrella header: pulls in the full library.

#include "bmdp/generate.hpp"
#include "bmdp/io.hpp"
#include "bmdp/metrics.hpp"
#include "bmdp/model.hpp"
#include "bmdp/pareto.hpp"
#include "bmdp/policy.hpp"
#include "bmdp/random.hpp"
#include "bmdp/solve.hpp"
#include "bmdp/spea2.hpp"
#include "bmdp/util.hpp"
