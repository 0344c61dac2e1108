#pragma once

#include "acmeter/antenna.hpp"
#include "acmeter/constraints.hpp"
#include "acmeter/environment.hpp"
#include "acmeter/geometry.hpp"
#include "acmeter/graphs.hpp"
#include "acmeter/metrics.hpp"
#include "acmeter/power.hpp"
#include "acmeter/propagation.hpp"
#include "acmeter/rng.hpp"
#include "acmeter/simulator.hpp"
#include "acmeter/sweep.hpp"
#include "acmeter/topology.hpp"
#include "acmeter/topology_io.hpp"
