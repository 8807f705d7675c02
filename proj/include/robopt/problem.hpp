#pragma once

#include "robopt/market_model.hpp"
#include "robopt/risk_measures.hpp"
#include "robopt/solution_function.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace robopt {

enum class Constraint { CompleteMarket, NoShortSelling, Bounded };

std::string to_string(Constraint c);
Constraint constraint_from_string(const std::string& s);

struct ProblemSpec {
    RiskLevel p;
    double x0 = 0.0;
    double m = std::numeric_limits<double>::quiet_NaN();  // bound, Bounded only
    Constraint constraint = Constraint::NoShortSelling;

    // budget range checks: 0 <= x0 < E[gamma X] (ns), 0 <= x0 < m (bd)
    void validate(const MarketModel& model) const;
};

struct DroSpec {
    ProblemSpec base;
    double epsilon = 0.0;
};

// A sequence of feasible positions whose objective decreases without bound.
struct WitnessSequence {
    std::vector<double> index;
    std::vector<SolutionFunction> elements;
    std::vector<double> objective_values;
    std::vector<double> budgets;
};

// Dispatches to the matching solver. A DRO radius routes bounded VaR problems
// to the robust solver.
SolutionFunction solve(const MarketModel& model, const ProblemSpec& spec, Rho rho,
                       std::optional<double> dro_epsilon = std::nullopt);

} // namespace robopt
