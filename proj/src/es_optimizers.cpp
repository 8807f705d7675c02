#include "robopt/es_optimizers.hpp"

#include "robopt/errors.hpp"
#include "robopt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

namespace robopt {

namespace {

std::string fmt(const char* f, double a, double b = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

struct Candidate {
    double es = kInf;
    double c = kInf;
    double r = 0.0;
};

bool better(const Candidate& a, const Candidate& b)
{
    return std::tie(a.es, a.c, a.r) < std::tie(b.es, b.c, b.r);
}

// log-spaced thresholds spanning the bulk of gamma(X), plus c = inf
std::vector<double> c_grid(const MarketModel& model, double p, int n)
{
    (void)p;
    double lo = std::max(model.gamma_ess_inf(), model.var_gamma(1e-6));
    double hi = model.var_gamma(1 - 1e-9);
    if (!(lo > 0))
        lo = std::max(1e-12, hi * 1e-9);
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
    return g;
}

// Evaluate every grid point in parallel, then refine around the best by
// golden section in log c. Deterministic lexicographic tie-break on (ES, c, r).
template <class Eval>
Candidate search_c(const std::vector<double>& grid, Eval&& eval)
{
    const auto n = static_cast<std::ptrdiff_t>(grid.size());
    std::vector<Candidate> res(grid.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        res[static_cast<std::size_t>(i)] = eval(grid[static_cast<std::size_t>(i)]);

    std::size_t best = 0;
    for (std::size_t i = 1; i < res.size(); ++i)
        if (better(res[i], res[best]))
            best = i;
    Candidate out = res[best];
    Candidate inf_c = eval(kInf);

    double a = grid[best == 0 ? 0 : best - 1];
    double b = grid[std::min(best + 1, grid.size() - 1)];
    if (a < b) {
        double lc = numerics::golden_section_min([&](double t) { return eval(std::exp(t)).es; }, std::log(a),
                                                 std::log(b), 120);
        Candidate refined = eval(std::exp(lc));
        if (better(refined, out))
            out = refined;
    }
    if (better(inf_c, out))
        out = inf_c;
    return out;
}

} // namespace

SolutionFunction solve_es_cm(const MarketModel& model, const ProblemSpec& spec)
{
    if (spec.constraint != Constraint::CompleteMarket)
        throw DomainError("solve_es_cm needs the complete-market constraint");
    spec.validate(model);
    auto report = check_assumptions(model, spec.p);
    if (!report.holds("E1"))
        throw NonexistenceError("E1 fails (" + report.get("E1").diagnostic +
                                "): the complete-market ES problem has no minimizer; see es_cm_witness");
    SolutionMeta meta;
    meta.problem = "es_cm";
    meta.form = "constant";
    meta.assumptions = report;
    meta.unique = false;
    meta.notes.push_back("constant x0 is one minimizer; others may exist");
    auto g = SolutionFunction::constant(spec.x0, std::move(meta));
    g.meta().objective = es_of(g, model.x(), spec.p);
    g.meta().budget = budget(model, g);
    return g;
}

WitnessSequence es_cm_witness(const MarketModel& model, const ProblemSpec& spec, const std::vector<double>& lambdas)
{
    if (spec.constraint != Constraint::CompleteMarket)
        throw DomainError("es_cm_witness needs the complete-market constraint");
    const double p = spec.p;
    auto report = check_assumptions(model, p);
    if (report.holds("E1"))
        throw DomainError("E1 holds, so no unbounded witness exists");
    auto a = model.gamma_above(1 / (1 - p));
    double y = model.gamma_mass(a);
    double pa = model.prob(a);
    double k = pa <= 1 - p ? pa / (1 - p) : 1.0;

    WitnessSequence w;
    for (double lam : lambdas) {
        if (!(lam >= 0))
            throw DomainError("witness weights must be nonnegative");
        SolutionMeta meta;
        meta.problem = "es_cm";
        meta.form = "lambda 1_A - lambda y + x0";
        meta.lambda = lam;
        meta.threshold = 1 / (1 - p);
        meta.notes.push_back(fmt("y = E[gamma 1_A] = %.17g, k = ES_p(1_A) = %.17g", y, k));
        meta.assumptions = report;
        double base = spec.x0 - lam * y;
        SolutionFunction g({Region{a, Piece::constant(base + lam)}, Region{a.complement(), Piece::constant(base)}},
                           std::move(meta));
        g.meta().objective = es_of(g, model.x(), spec.p);
        g.meta().budget = budget(model, g);
        w.index.push_back(lam);
        w.objective_values.push_back(g.meta().objective);
        w.budgets.push_back(g.meta().budget);
        w.elements.push_back(std::move(g));
    }
    return w;
}

namespace {

SolutionFunction es_ns_constant_gamma(const MarketModel& model, const ProblemSpec& spec, SolutionMeta meta)
{
    const double x0 = spec.x0;
    const double ex = model.expect_gamma_x();
    const double need = ex - x0;
    auto excess = [&](double r) {
        auto up = IntervalSet::above(r);
        return model.gamma_first(up) - r * model.gamma_mass(up);
    };
    double r_max = 0.0;
    if (need > 0) {
        auto [lo, hi] = model.x().support();
        double top = std::isfinite(hi) ? hi : model.x().quantile(1 - 1e-15);
        while (excess(top) >= need)
            top *= 2;
        r_max = numerics::bracketed_root([&](double r) { return excess(r) - need; }, std::max(0.0, lo), top,
                                         1e-15 * std::max(1.0, ex))
                    .root;
    }
    auto make = [&](double r) {
        double ex_r = excess(r);
        double lam = ex_r > 0 ? std::min(1.0, need / ex_r) : 1.0;
        return SolutionFunction({Region{IntervalSet::all(), Piece::convex_mix(lam, r)}});
    };
    auto es_at = [&](double r) { return es_of(make(r), model.x(), spec.p); };

    constexpr int n = 64;
    std::vector<double> rs(n + 1), vals(n + 1);
    const auto nn = static_cast<std::ptrdiff_t>(n + 1);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < nn; ++i) {
        auto k = static_cast<std::size_t>(i);
        rs[k] = r_max * static_cast<double>(i) / n;
        vals[k] = es_at(rs[k]);
    }
    rs[n] = r_max;
    std::size_t best = 0;
    for (std::size_t i = 1; i < rs.size(); ++i)
        if (vals[i] < vals[best] || (vals[i] == vals[best] && rs[i] < rs[best]))
            best = i;
    double r = rs[best];
    double v = vals[best];
    if (r_max > 0) {
        double a = rs[best == 0 ? 0 : best - 1], b = rs[std::min<std::size_t>(best + 1, n)];
        double rr = numerics::golden_section_min(es_at, a, b, 120);
        double vr = es_at(rr);
        if (vr < v) {
            r = rr;
            v = vr;
        }
    }
    auto g = make(r);
    double lam = g.regions().front().piece.lambda;
    meta.form = "(1 - lambda) x + lambda min(x, r)";
    meta.c = model.gamma()(0.0);
    meta.r = r;
    meta.lambda = lam;
    meta.notes.push_back(fmt("gamma constant: search over r in [0, %.17g] with lambda(r) closing the budget", r_max));
    SolutionFunction out({Region{IntervalSet::all(), Piece::convex_mix(lam, r)}}, std::move(meta));
    out.meta().objective = es_of(out, model.x(), spec.p);
    out.meta().budget = budget(model, out);
    return out;
}

} // namespace

SolutionFunction solve_es_ns(const MarketModel& model, const ProblemSpec& spec)
{
    if (spec.constraint != Constraint::NoShortSelling)
        throw DomainError("solve_es_ns needs the no-short-selling constraint");
    spec.validate(model);
    const double p = spec.p, x0 = spec.x0;

    SolutionMeta meta;
    meta.problem = "es_ns";
    meta.assumptions = check_assumptions(model, p);
    meta.unique = false;
    meta.notes.push_back("lexicographically smallest optimal (ES, c, r) returned; other optima may exist");

    if (model.gamma().is_constant())
        return es_ns_constant_gamma(model, spec, std::move(meta));

    // r(c) from the binding budget, then ES of the resulting position
    auto solve_r = [&](const IntervalSet& s) {
        auto rest = s.complement();
        double base = model.gamma_first(s);
        auto f = [&](double r) {
            return base + model.gamma_first(rest.intersect(Interval{-kInf, r})) +
                   r * model.gamma_mass(rest.intersect(Interval{r, kInf})) - x0;
        };
        if (f(0.0) >= 0)
            return 0.0;
        double top = std::isfinite(rest.sup()) ? std::min(rest.sup(), model.x().support().second) : kInf;
        if (!std::isfinite(top))
            top = model.x().quantile(1 - 1e-15);
        while (f(top) < 0)
            top *= 2;
        return numerics::bracketed_root(f, 0.0, top, 1e-15 * std::max(1.0, x0)).root;
    };
    auto position = [&](double c, double r) {
        auto s = std::isfinite(c) ? model.gamma_above(c) : IntervalSet();
        return SolutionFunction({Region{s, Piece::identity()}, Region{s.complement(), Piece::min_with(r)}});
    };
    auto eval = [&](double c) {
        auto s = std::isfinite(c) ? model.gamma_above(c) : IntervalSet();
        double r = solve_r(s);
        return Candidate{es_of(position(c, r), model.x(), spec.p), c, r};
    };

    auto best = search_c(c_grid(model, p, 64), eval);
    auto s = std::isfinite(best.c) ? model.gamma_above(best.c) : IntervalSet();
    meta.form = "x 1{gamma > c} + min(x, r) 1{gamma < c}";
    meta.c = best.c;
    meta.r = best.r;
    meta.lambda = 0.0;
    if (model.gamma().monotonicity() == Monotonicity::Increasing && !s.empty())
        meta.threshold = s.inf();
    meta.notes.push_back("P(gamma = c) = 0, so the mixing weight is irrelevant and set to 0");
    SolutionFunction g({Region{s, Piece::identity()}, Region{s.complement(), Piece::min_with(best.r)}},
                       std::move(meta));
    g.meta().objective = es_of(g, model.x(), spec.p);
    g.meta().budget = budget(model, g);
    return g;
}

SolutionFunction solve_es_bd(const MarketModel& model, const ProblemSpec& spec)
{
    if (spec.constraint != Constraint::Bounded)
        throw DomainError("solve_es_bd needs the bounded constraint");
    spec.validate(model);
    const double p = spec.p, x0 = spec.x0, m = spec.m;

    SolutionMeta meta;
    meta.problem = "es_bd";
    meta.assumptions = check_assumptions(model, p);
    meta.unique = false;
    meta.notes.push_back("lexicographically smallest optimal (ES, c, r) returned; other optima may exist");

    if (model.gamma().is_constant()) {
        meta.form = "constant";
        meta.c = model.gamma()(0.0);
        meta.r = x0;
        meta.lambda = x0;
        meta.notes.push_back("gamma constant: {gamma = c} is everything and the optimum is the constant x0");
        auto g = SolutionFunction::constant(x0, std::move(meta));
        g.meta().objective = es_of(g, model.x(), spec.p);
        g.meta().budget = budget(model, g);
        return g;
    }

    auto eval = [&](double c) {
        auto s = std::isfinite(c) ? model.gamma_above(c) : IntervalSet();
        double qs = model.gamma_mass(s);
        double qc = model.gamma_mass(s.complement());
        double r = qc > 0 ? std::max(0.0, (x0 - m * qs) / qc) : 0.0;
        double pi = model.prob(s);
        double es = pi <= 1 - p ? (pi * m + (1 - p - pi) * r) / (1 - p) : m;
        return Candidate{es, c, r};
    };
    auto best = search_c(c_grid(model, p, 64), eval);
    auto s = std::isfinite(best.c) ? model.gamma_above(best.c) : IntervalSet();

    meta.form = "m 1{gamma > c} + r 1{gamma < c} + lambda 1{gamma = c}";
    meta.c = best.c;
    meta.r = best.r;
    meta.lambda = best.r;
    if (model.gamma().monotonicity() == Monotonicity::Increasing && !s.empty())
        meta.threshold = s.inf();
    meta.notes.push_back("P(gamma = c) = 0, so the atom value lambda is set to r");
    SolutionFunction g({Region{s, Piece::constant(m)}, Region{s.complement(), Piece::constant(best.r)}},
                       std::move(meta));
    g.meta().objective = es_of(g, model.x(), spec.p);
    g.meta().budget = budget(model, g);
    return g;
}

} // namespace robopt
