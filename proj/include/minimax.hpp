#ifndef MINIMAX_HPP_
#define MINIMAX_HPP_

#include "minimax/errors.hpp"
#include "minimax/game_solver.hpp"
#include "minimax/io.hpp"
#include "minimax/moment_solver.hpp"
#include "minimax/normal.hpp"
#include "minimax/parallel.hpp"
#include "minimax/payoff.hpp"
#include "minimax/piecewise_linear.hpp"
#include "minimax/rng.hpp"
#include "minimax/simulation.hpp"
#include "minimax/stats.hpp"
#include "minimax/stochastic.hpp"
#include "minimax/verification.hpp"

#endif  // MINIMAX_HPP_
