#pragma once

#include "core.hpp"
#include "deterministic.hpp"
#include "evaluation.hpp"
#include "experiment.hpp"
#include "io.hpp"
#include "milp.hpp"
#include "reliability.hpp"
#include "saa.hpp"
#include "scenarios.hpp"
#include "stats.hpp"
#include "stochastic.hpp"
