#pragma once

#include "robopt/problem.hpp"

namespace robopt {

// Constant x0 when ess-sup gamma <= 1/(1-p); NonexistenceError otherwise.
SolutionFunction solve_es_cm(const MarketModel& model, const ProblemSpec& spec);

// g_lambda = lambda 1_A - lambda y + x0 with A = {gamma > 1/(1-p)}, y = E[gamma 1_A].
WitnessSequence es_cm_witness(const MarketModel& model, const ProblemSpec& spec,
                              const std::vector<double>& lambdas);

// x on {gamma > c}, min(x, r) on {gamma < c}, convex mix on {gamma = c}.
SolutionFunction solve_es_ns(const MarketModel& model, const ProblemSpec& spec);

// m on {gamma > c}, r on {gamma < c}, lambda on {gamma = c}.
SolutionFunction solve_es_bd(const MarketModel& model, const ProblemSpec& spec);

} // namespace robopt
