#pragma once

#include "bcmpc/core.hpp"
#include "bcmpc/vessel.hpp"
#include "bcmpc/primitives.hpp"
#include "bcmpc/guidance.hpp"
#include "bcmpc/tree.hpp"
#include "bcmpc/objective.hpp"
#include "bcmpc/obstacles.hpp"
#include "bcmpc/planner.hpp"
#include "bcmpc/sim.hpp"
#include "bcmpc/config.hpp"
#include "bcmpc/io.hpp"
