#include "robopt/var_optimizers.hpp"

#include "robopt/errors.hpp"
#include "robopt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace robopt {

namespace {

std::string fmt(const char* f, double a, double b = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

bool gamma_monotone_up(const MarketModel& model)
{
    auto m = model.gamma().monotonicity();
    return m == Monotonicity::Constant || m == Monotonicity::Increasing;
}

// VaR_p(h(X)) and the set {h > VaR_p(h(X))} for a continuous function h.
struct UpperSet {
    double level;
    IntervalSet set;
};

UpperSet upper_p_set(const MarketModel& model, const std::function<double(double)>& h, double p)
{
    auto pred = [&](double c) { return 1.0 - model.prob(model.level_set_above(h, c)) >= p - kProbTol; };
    double lo = -1, hi = 1;
    while (pred(lo))
        lo *= 2;
    while (!pred(hi))
        hi *= 2;
    double c = numerics::first_true(pred, lo, hi);
    return {c, model.level_set_above(h, c)};
}

} // namespace

SolutionFunction var_cm_witness(const MarketModel& model, const ProblemSpec& spec, double d)
{
    if (spec.constraint != Constraint::CompleteMarket)
        throw DomainError("var_cm_witness needs the complete-market constraint");
    if (!std::isfinite(d))
        throw DomainError("witness level d must be finite");
    double y = model.x().quantile(spec.p);
    auto upper = IntervalSet::above(y);
    double lambda = model.gamma_mass(upper);
    SolutionMeta meta;
    meta.problem = "var_cm";
    meta.form = "d + (x0 - d)/lambda 1{x > y}";
    meta.threshold = y;
    meta.lambda = lambda;
    meta.notes.push_back("no minimizer exists; d -> -inf drives the objective to -inf");
    SolutionFunction g({Region{upper.complement(), Piece::constant(d)},
                        Region{upper, Piece::constant(d + (spec.x0 - d) / lambda)}},
                       std::move(meta));
    g.meta().objective = var_of(g, model.x(), spec.p);
    g.meta().budget = budget(model, g);
    return g;
}

WitnessSequence var_cm_witness_sequence(const MarketModel& model, const ProblemSpec& spec,
                                        const std::vector<double>& ds)
{
    WitnessSequence w;
    for (double d : ds) {
        auto g = var_cm_witness(model, spec, d);
        w.index.push_back(d);
        w.objective_values.push_back(g.meta().objective);
        w.budgets.push_back(g.meta().budget);
        w.elements.push_back(std::move(g));
    }
    return w;
}

SolutionFunction solve_var_ns(const MarketModel& model, const ProblemSpec& spec)
{
    if (spec.constraint != Constraint::NoShortSelling)
        throw DomainError("solve_var_ns needs the no-short-selling constraint");
    spec.validate(model);
    const double p = spec.p;
    const double x0 = spec.x0;
    const auto& gam = model.gamma();
    const double xp = model.x().quantile(p);
    const bool mono = gamma_monotone_up(model);

    SolutionMeta meta;
    meta.problem = "var_ns";
    meta.assumptions = check_assumptions(model, p);

    // q = 0 branch: ES_p(gamma X) >= x0/(1-p)
    UpperSet s0;
    if (mono)
        s0 = {gam(xp) * xp, IntervalSet::above(xp)};
    else
        s0 = upper_p_set(model, [&](double x) { return gam(x) * x; }, p);
    double es_gx = s0.level + (model.gamma_first(s0.set) - s0.level * model.prob(s0.set)) / (1 - p);
    meta.notes.push_back(fmt("ES_p(gamma X) = %.17g against x0/(1-p) = %.17g", es_gx, x0 / (1 - p)));

    if (es_gx >= x0 / (1 - p)) {
        meta.form = "x 1_S";
        meta.q = 0.0;
        meta.c = s0.level;
        meta.unique = false;
        meta.notes.push_back("q = 0: one representative of possibly many optimizers");
        meta.assumptions.set({"V1", CheckStatus::Fails, "q = 0, so the uniqueness condition does not apply"});
        if (mono)
            meta.threshold = xp;
        SolutionFunction g({Region{s0.set, Piece::identity()}, Region{s0.set.complement(), Piece::constant(0.0)}},
                           std::move(meta));
        g.meta().objective = var_of(g, model.x(), spec.p);
        g.meta().budget = budget(model, g);
        return g;
    }

    // S(q) = {(x-q)gamma(x) > c(q)}, c(q) = VaR_p((X-q)gamma)
    auto region_for = [&](double q) -> UpperSet {
        if (mono)
            return {(xp - q) * gam(xp), IntervalSet::above(xp)};
        return upper_p_set(model, [&, q](double x) { return (x - q) * gam(x); }, p);
    };
    auto budget_at = [&](double q) {
        auto s = region_for(q).set;
        auto rest = s.complement();
        return model.gamma_first(s) + model.gamma_first(rest.intersect(Interval{-kInf, q})) +
               q * model.gamma_mass(rest.intersect(Interval{q, kInf}));
    };
    auto f = [&](double q) { return budget_at(q) - x0; };

    constexpr int grid = 64;
    std::vector<double> qs(grid + 1), fs(grid + 1);
    for (int i = 0; i <= grid; ++i) {
        qs[i] = xp * i / grid;
        fs[i] = f(qs[i]);
    }
    const double ftol = 1e-14 * std::max(1.0, x0);
    std::vector<double> roots;
    for (int i = 0; i < grid; ++i) {
        if (fs[i] == 0.0)
            roots.push_back(qs[i]);
        else if ((fs[i] < 0) != (fs[i + 1] < 0) && fs[i + 1] != 0.0)
            roots.push_back(numerics::bracketed_root(f, qs[i], qs[i + 1], ftol).root);
    }
    if (fs[grid] == 0.0)
        roots.push_back(qs[grid]);
    if (roots.empty())
        throw NumericError(fmt("no budget root for q on [0, %.17g]; f(0) = %.3g", xp, fs[0]),
                           std::min(std::fabs(fs[0]), std::fabs(fs[grid])));

    double q = roots.front();
    auto s = region_for(q);
    meta.form = "x 1{(x-q)gamma(x) > c} + min(x,q) 1{(x-q)gamma(x) <= c}";
    meta.q = q;
    meta.c = s.level;
    meta.q_roots = roots;
    meta.multiple_roots = roots.size() > 1;
    if (meta.multiple_roots)
        meta.notes.push_back("several budget roots found; the smallest q is returned");
    if (mono)
        meta.threshold = xp;

    double mass = 1.0 - model.prob(s.set);
    bool v1 = q > 0 && std::fabs(mass - p) <= 1e-6;
    meta.assumptions.set({"V1", v1 ? CheckStatus::Holds : CheckStatus::Fails,
                          fmt("q = %.17g, P((X-q)gamma <= c) = %.17g", q, mass)});
    if (!v1) {
        meta.unique = false;
        meta.notes.push_back("V1 fails: the returned form is a representative, uniqueness not established");
    }

    SolutionFunction g({Region{s.set, Piece::identity()}, Region{s.set.complement(), Piece::min_with(q)}},
                       std::move(meta));
    g.meta().objective = var_of(g, model.x(), spec.p);
    g.meta().budget = budget(model, g);
    return g;
}

SolutionFunction solve_var_bd(const MarketModel& model, const ProblemSpec& spec)
{
    if (spec.constraint != Constraint::Bounded)
        throw DomainError("solve_var_bd needs the bounded constraint");
    spec.validate(model);
    const double p = spec.p, x0 = spec.x0, m = spec.m;

    SolutionMeta meta;
    meta.problem = "var_bd";
    meta.assumptions = check_assumptions(model, p);

    double c = model.var_gamma(p);
    double es_g = model.es_gamma(p);
    meta.c = c;
    meta.notes.push_back(fmt("m ES_p(gamma) = %.17g against x0/(1-p) = %.17g", m * es_g, x0 / (1 - p)));

    if (m * es_g >= x0 / (1 - p)) {
        auto s = model.gamma_above(c);
        if (model.gamma().is_constant()) {
            // every set of probability 1-p is optimal; take the upper tail of X
            s = IntervalSet::above(model.x().quantile(p));
            meta.notes.push_back("gamma constant: {X > VaR_p(X)} used as the upper set");
        }
        meta.form = "m 1_S";
        meta.q_prime = 0.0;
        meta.unique = false;
        meta.notes.push_back("q' = 0: one representative of possibly many optimizers");
        meta.assumptions.set({"V2", CheckStatus::Fails, "q' = 0, so the uniqueness condition does not apply"});
        SolutionFunction g({Region{s, Piece::constant(m)}, Region{s.complement(), Piece::constant(0.0)}},
                           std::move(meta));
        g.meta().objective = var_of(g, model.x(), spec.p);
        g.meta().budget = budget(model, g);
        return g;
    }

    auto s = model.gamma_above(c);
    double mass = 1.0 - model.prob(s);
    if (model.gamma().is_constant() || std::fabs(mass - p) > 1e-6)
        throw AssumptionError(fmt("V2 fails: P(gamma <= VaR_p(gamma)) = %.17g, p = %.17g", mass, p));
    meta.assumptions.set({"V2", CheckStatus::Holds, fmt("P(gamma <= VaR_p(gamma)) = %.17g", mass)});

    double qs = model.gamma_mass(s);
    double qc = model.gamma_mass(s.complement());
    double qp = (x0 - m * qs) / qc;
    if (!(qp > 0 && qp < m))
        throw NumericError(fmt("q' = %.17g outside (0, m = %.17g)", qp, m), qp);

    meta.form = "m 1{gamma > c} + q' 1{gamma <= c}";
    meta.q_prime = qp;
    if (model.gamma().monotonicity() == Monotonicity::Increasing && !s.empty())
        meta.threshold = s.inf();
    SolutionFunction g({Region{s, Piece::constant(m)}, Region{s.complement(), Piece::constant(qp)}},
                       std::move(meta));
    g.meta().objective = var_of(g, model.x(), spec.p);
    g.meta().budget = budget(model, g);
    return g;
}

} // namespace robopt
