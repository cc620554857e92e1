#pragma once

#include "hh/common.hpp"
#include "hh/core.hpp"
#include "hh/domains/csp.hpp"
#include "hh/domains/knapsack.hpp"
#include "hh/domains/partition.hpp"
#include "hh/ga.hpp"
#include "hh/harness/experiment.hpp"
#include "hh/harness/scenario.hpp"
#include "hh/harness/vat.hpp"
#include "hh/io.hpp"
#include "hh/kernel.hpp"
#include "hh/stats.hpp"
#include "hh/transforms.hpp"
