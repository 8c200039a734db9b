#pragma once

#include "nqueens/bankmodel.hpp"
#include "nqueens/bitboard.hpp"
#include "nqueens/checkpoint.hpp"
#include "nqueens/errors.hpp"
#include "nqueens/runner.hpp"
#include "nqueens/scheduler.hpp"
#include "nqueens/solver.hpp"
#include "nqueens/stack_config.hpp"
#include "nqueens/subproblems.hpp"
