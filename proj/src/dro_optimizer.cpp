#include "robopt/dro_optimizer.hpp"

#include "robopt/errors.hpp"
#include "robopt/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace robopt {

SolutionFunction solve_dro_var_bd(const MarketModel& model, const DroSpec& spec)
{
    const auto& base = spec.base;
    if (base.constraint != Constraint::Bounded)
        throw DomainError("the robust VaR solver needs the bounded constraint");
    if (!(spec.epsilon > 0) || !std::isfinite(spec.epsilon))
        throw DomainError("uncertainty radius epsilon must be positive");
    base.validate(model);
    const double p = base.p, x0 = base.x0, m = base.m, eps = spec.epsilon;

    auto report = check_assumptions(model, p);
    if (report.get("V3").status == CheckStatus::Fails)
        throw AssumptionError("V3 fails: " + report.get("V3").diagnostic);

    double c = model.x().quantile(p);
    auto s = IntervalSet::above(c + eps);
    double q = (x0 - m * model.gamma_mass(s)) / model.gamma_mass(s.complement());
    char buf[160];
    std::snprintf(buf, sizeof buf, "q = %.17g", q);
    if (!(q > 0))
        throw AssumptionError(std::string("V3 fails after solving: ") + buf + " is not positive");
    report.set({"V3", CheckStatus::Holds, std::string("structural conditions hold and ") + buf + " > 0"});

    SolutionMeta meta;
    meta.problem = "dro_var_bd";
    meta.form = "m 1{x > c + eps} + q 1{x <= c + eps}";
    meta.q = q;
    meta.c = c;
    meta.threshold = c + eps;
    meta.epsilon = eps;
    meta.assumptions = report;
    meta.unique = false;
    meta.notes.push_back("worst-case objective over the L-infinity ball equals q by construction");
    // with flat pieces of gamma the sets {gamma > VaR(gamma)} and {X > VaR(X)} need
    // not agree, so the small-eps limit may miss the bounded solution
    const auto& gam = model.gamma();
    const bool strict = gam.monotonicity() == Monotonicity::Increasing &&
                        (gam.kind() == PricingDensity::Kind::Linear || gam.kind() == PricingDensity::Kind::Power);
    if (!strict)
        meta.notes.push_back("gamma is not known to be strictly increasing; the eps -> 0 limit may differ from the bounded solution");
    SolutionFunction g({Region{s, Piece::constant(m)}, Region{s.complement(), Piece::constant(q)}}, std::move(meta));
    g.meta().objective = q;
    g.meta().budget = budget(model, g);
    return g;
}

SolutionFunction compose(const SolutionFunction& g, const std::vector<Segment>& t)
{
    const auto& gs = g.segments();
    std::vector<Segment> out;
    for (const auto& piece : t) {
        if (piece.slope == 0.0) {
            out.push_back({piece.lo, piece.hi, g(piece.intercept), 0.0});
            continue;
        }
        if (piece.slope != 1.0)
            throw DomainError("compose expects maps with slope 0 or 1");
        double shift = piece.intercept;
        for (const auto& s : gs) {
            double lo = std::max(piece.lo, s.lo - shift);
            double hi = std::min(piece.hi, s.hi - shift);
            if (lo < hi)
                out.push_back({lo, hi, s.intercept + s.slope * shift, s.slope});
        }
    }
    // rounding in s.lo - shift can leave hairline gaps; close them
    std::sort(out.begin(), out.end(), [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < out.size(); ++i)
        out[i].lo = out[i - 1].hi;
    if (!out.empty()) {
        out.front().lo = -kInf;
        out.back().hi = kInf;
    }
    return SolutionFunction::from_segments(std::move(out));
}

namespace {

// Nearest-point map into A within eps: points just below an interval jump
// inside it, points just above it drop onto its right end.
std::vector<Segment> reach_map(const IntervalSet& a, double eps)
{
    std::vector<double> cuts{-kInf, kInf};
    for (const auto& iv : a.parts())
        for (double v : {iv.lo, iv.hi, iv.lo - eps, iv.hi + eps, iv.hi - eps})
            if (std::isfinite(v))
                cuts.push_back(v);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const auto& parts = a.parts();
    std::vector<Segment> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double lo = cuts[i], hi = cuts[i + 1];
        double mid = std::isfinite(lo) && std::isfinite(hi) ? 0.5 * (lo + hi)
                     : std::isfinite(hi)                     ? hi - 1
                     : std::isfinite(lo)                     ? lo + 1
                                                             : 0.0;
        Segment seg{lo, hi, 0.0, 1.0};
        if (!a.contains(mid)) {
            for (const auto& iv : parts) {
                if (mid <= iv.lo && mid + eps > iv.lo) {
                    seg = mid + eps <= iv.hi ? Segment{lo, hi, eps, 1.0} : Segment{lo, hi, iv.hi, 0.0};
                    break;
                }
                if (mid > iv.hi && mid - eps <= iv.hi) {
                    seg = Segment{lo, hi, iv.hi, 0.0};
                    break;
                }
            }
        }
        out.push_back(seg);
    }
    return out;
}

} // namespace

WorstCaseResult worst_case_var_detail(const MarketModel& model, const SolutionFunction& g, RiskLevel p,
                                      double epsilon, std::size_t n_adversarial, std::uint64_t seed)
{
    if (!(epsilon > 0))
        throw DomainError("epsilon must be positive");
    std::vector<std::vector<Segment>> maps;
    std::vector<std::string> kinds;

    maps.push_back({{-kInf, kInf, 0.0, 1.0}});
    kinds.push_back("identity");
    for (double t : g.level_values()) {
        auto a = g.above(t);
        if (a.empty())
            continue;
        maps.push_back(reach_map(a, epsilon));
        kinds.push_back("reach");
    }

    constexpr std::size_t pieces = 16;
    std::vector<double> cuts{-kInf};
    for (std::size_t j = 1; j < pieces; ++j)
        cuts.push_back(model.x().quantile(static_cast<double>(j) / pieces));
    cuts.push_back(kInf);
    std::vector<double> u(n_adversarial * pieces);
    kernels::fill_uniform(seed, kernels::kStreamAdversary, u);
    for (std::size_t i = 0; i < n_adversarial; ++i) {
        std::vector<Segment> t;
        for (std::size_t j = 0; j < pieces; ++j)
            if (cuts[j] < cuts[j + 1])
                t.push_back({cuts[j], cuts[j + 1], epsilon * (2 * u[i * pieces + j] - 1), 1.0});
        maps.push_back(std::move(t));
        kinds.push_back("random");
    }

    std::vector<double> values(maps.size());
    const auto n = static_cast<std::ptrdiff_t>(maps.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        auto k = static_cast<std::size_t>(i);
        values[k] = var_of(compose(g, maps[k]), model.x(), p);
    }

    WorstCaseResult res;
    res.evaluated = values.size();
    res.value = values[0];
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > res.value) {
            res.value = values[i];
            res.best_index = i;
        }
    res.best_kind = kinds[res.best_index];
    return res;
}

double worst_case_var(const MarketModel& model, const SolutionFunction& g, RiskLevel p, double epsilon,
                      std::size_t n_adversarial, std::uint64_t seed)
{
    return worst_case_var_detail(model, g, p, epsilon, n_adversarial, seed).value;
}

} // namespace robopt
