#pragma once

#include "robopt/problem.hpp"

namespace robopt {

// g_d = d + (x0 - d)/lambda 1{x > VaR_p(X)}, budget x0 and VaR_p(g_d(X)) = d.
SolutionFunction var_cm_witness(const MarketModel& model, const ProblemSpec& spec, double d);
WitnessSequence var_cm_witness_sequence(const MarketModel& model, const ProblemSpec& spec,
                                        const std::vector<double>& ds);

// x 1{(x-q)gamma > c} + min(x,q) 1{(x-q)gamma <= c}, or X 1_{S0} when q = 0.
SolutionFunction solve_var_ns(const MarketModel& model, const ProblemSpec& spec);

// m 1{gamma > c} + q' 1{gamma <= c} with c = VaR_p(gamma).
SolutionFunction solve_var_bd(const MarketModel& model, const ProblemSpec& spec);

} // namespace robopt
