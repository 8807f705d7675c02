#pragma once

#include "robopt/problem.hpp"

#include <cstdint>
#include <string>

namespace robopt {

// m 1{x > c + eps} + q 1{x <= c + eps}, c = VaR_p(X), q from the binding budget.
SolutionFunction solve_dro_var_bd(const MarketModel& model, const DroSpec& spec);

struct WorstCaseResult {
    double value = 0.0;
    std::size_t best_index = 0;
    std::string best_kind;
    std::size_t evaluated = 0;
};

// Lower bound on sup { VaR_p(g(Y)) : |Y - X| <= eps } from structured
// nearest-point adversaries plus n_adversarial random ones.
WorstCaseResult worst_case_var_detail(const MarketModel& model, const SolutionFunction& g, RiskLevel p,
                                      double epsilon, std::size_t n_adversarial, std::uint64_t seed = 7);
double worst_case_var(const MarketModel& model, const SolutionFunction& g, RiskLevel p, double epsilon,
                      std::size_t n_adversarial, std::uint64_t seed = 7);

// h = g(T(x)) for a piecewise linear map T given as segments with slope 0 or 1.
SolutionFunction compose(const SolutionFunction& g, const std::vector<Segment>& t);

} // namespace robopt
