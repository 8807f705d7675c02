#include "robopt/problem.hpp"

#include "robopt/dro_optimizer.hpp"
#include "robopt/errors.hpp"
#include "robopt/es_optimizers.hpp"
#include "robopt/var_optimizers.hpp"

#include <cmath>

namespace robopt {

std::string to_string(Constraint c)
{
    switch (c) {
    case Constraint::CompleteMarket: return "cm";
    case Constraint::NoShortSelling: return "ns";
    case Constraint::Bounded: return "bd";
    }
    return "?";
}

Constraint constraint_from_string(const std::string& s)
{
    if (s == "cm")
        return Constraint::CompleteMarket;
    if (s == "ns")
        return Constraint::NoShortSelling;
    if (s == "bd")
        return Constraint::Bounded;
    throw DomainError("unknown constraint '" + s + "' (expected cm, ns or bd)");
}

void ProblemSpec::validate(const MarketModel& model) const
{
    if (!std::isfinite(x0))
        throw DomainError("budget x0 must be finite");
    switch (constraint) {
    case Constraint::CompleteMarket:
        break;
    case Constraint::NoShortSelling: {
        double cap = model.expect_gamma_x();
        if (!(x0 >= 0 && x0 < cap))
            throw DomainError("no-short-selling budget needs 0 <= x0 < E[gamma X] = " + std::to_string(cap));
        break;
    }
    case Constraint::Bounded:
        if (!std::isfinite(m))
            throw DomainError("bounded problem needs a finite bound m");
        if (!(x0 >= 0 && x0 < m))
            throw DomainError("bounded problem needs 0 <= x0 < m");
        break;
    }
}

SolutionFunction solve(const MarketModel& model, const ProblemSpec& spec, Rho rho,
                       std::optional<double> dro_epsilon)
{
    if (dro_epsilon) {
        if (rho != Rho::VaR || spec.constraint != Constraint::Bounded)
            throw DomainError("the robust solver covers bounded VaR problems only");
        return solve_dro_var_bd(model, DroSpec{spec, *dro_epsilon});
    }
    if (rho == Rho::VaR) {
        switch (spec.constraint) {
        case Constraint::CompleteMarket:
            throw NonexistenceError("complete-market VaR problem has no minimizer (objective unbounded below)");
        case Constraint::NoShortSelling: return solve_var_ns(model, spec);
        case Constraint::Bounded: return solve_var_bd(model, spec);
        }
    }
    switch (spec.constraint) {
    case Constraint::CompleteMarket: return solve_es_cm(model, spec);
    case Constraint::NoShortSelling: return solve_es_ns(model, spec);
    case Constraint::Bounded: return solve_es_bd(model, spec);
    }
    throw DomainError("unreachable constraint");
}

} // namespace robopt
