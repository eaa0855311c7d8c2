#pragma once

#include "rcsp/budget_graph.hpp"
#include "rcsp/generate.hpp"
#include "rcsp/geometry.hpp"
#include "rcsp/oracle.hpp"
#include "rcsp/planner.hpp"
#include "rcsp/refine.hpp"
#include "rcsp/scenario.hpp"
#include "rcsp/svg.hpp"
#include "rcsp/wavefront.hpp"
