#include "robopt/robustness_probe.hpp"

#include "robopt/errors.hpp"
#include "robopt/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>

namespace robopt {

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Robust: return "Robust";
    case Verdict::NonRobust: return "NonRobust";
    case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::string to_string(Guarantee g)
{
    return g == Guarantee::GuaranteedRobust ? "GuaranteedRobust" : "NoGuarantee";
}

VerdictResult decide_verdict(const std::vector<double>& distances, const std::vector<double>& gaps,
                             const std::vector<double>& stderrs)
{
    VerdictResult out;
    const std::size_t n = distances.size();
    if (gaps.size() != n || stderrs.size() != n)
        throw DomainError("verdict inputs differ in length");
    if (n < 3) {
        out.reason = "fewer than three points";
        return out;
    }
    for (std::size_t i = 1; i < n; ++i)
        if (!(distances[i] < distances[i - 1])) {
            out.reason = "distances are not strictly decreasing";
            return out;
        }

    const std::size_t k = n - 3;
    double se = 0;
    for (std::size_t i = k; i < n; ++i)
        se = std::max(se, stderrs[i]);
    out.threshold = 10 * (se + 1e-6);
    const double tau = out.threshold;

    for (std::size_t i = k; i < n; ++i)
        if (!std::isfinite(gaps[i])) {
            if (gaps[i] > 0) {
                out.verdict = Verdict::NonRobust;
                out.limit_gap_estimate = gaps[i];
                out.reason = "infinite gap near X";
            } else {
                out.reason = "non-finite gap";
            }
            return out;
        }

    double dm = 0, gm = 0;
    for (std::size_t i = k; i < n; ++i) {
        dm += distances[i] / 3;
        gm += gaps[i] / 3;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = k; i < n; ++i) {
        sxy += (distances[i] - dm) * (gaps[i] - gm);
        sxx += (distances[i] - dm) * (distances[i] - dm);
    }
    const double slope = sxx > 0 ? sxy / sxx : 0.0;
    const double lim = gm - slope * dm;
    out.limit_gap_estimate = lim;
    const double gmin = gaps[n - 1];

    bool all_large = true, same_sign = true;
    for (std::size_t i = k; i < n; ++i) {
        all_large = all_large && std::fabs(gaps[i]) > tau;
        same_sign = same_sign && (gaps[i] > 0) == (gmin > 0);
    }
    char buf[200];
    if (all_large && same_sign && std::fabs(lim) > tau && std::fabs(lim) >= 0.5 * std::fabs(gmin)) {
        out.verdict = Verdict::NonRobust;
        std::snprintf(buf, sizeof buf, "gaps stay above tau = %.3g; limit estimate %.6g", tau, lim);
        out.reason = buf;
        return out;
    }
    bool shrinking = true;
    for (std::size_t i = k + 1; i < n; ++i)
        shrinking = shrinking && std::fabs(gaps[i]) <= std::fabs(gaps[i - 1]) + tau;
    // an intercept near zero only means something when the gaps keep one sign
    if (shrinking && (std::fabs(gmin) <= tau || (same_sign && std::fabs(lim) < 0.5 * std::fabs(gmin)))) {
        out.verdict = Verdict::Robust;
        std::snprintf(buf, sizeof buf, "gaps shrink toward zero (tau = %.3g, limit estimate %.3g)", tau, lim);
        out.reason = buf;
        return out;
    }
    std::snprintf(buf, sizeof buf, "no decision at tau = %.3g (limit estimate %.6g)", tau, lim);
    out.reason = buf;
    return out;
}

std::vector<std::pair<double, double>> RobustnessReport::gap_curve() const
{
    std::vector<std::pair<double, double>> out;
    for (const auto& pt : points)
        out.emplace_back(pt.distance, pt.gap);
    return out;
}

namespace {

struct McStats {
    double value;
    double stderr_;
};

McStats mc_rho(Rho rho, std::span<const double> v, RiskLevel p, std::size_t batches)
{
    McStats s{rho_samples(rho, v, p), 0.0};
    if (batches >= 2 && v.size() >= batches) {
        auto b = kernels::batch_rho(rho, v, p, batches);
        double mean = 0;
        for (double x : b)
            mean += x;
        mean /= static_cast<double>(b.size());
        double ss = 0;
        for (double x : b)
            ss += (x - mean) * (x - mean);
        double nb = static_cast<double>(b.size());
        s.stderr_ = std::sqrt(ss / (nb - 1) / nb);
    }
    return s;
}

} // namespace

RobustnessReport probe(const MarketModel& model, const SolutionFunction& g, Rho rho, RiskLevel p,
                       const PerturbationFamily& family, const MetricKind& metric, const std::vector<double>& eps_grid,
                       const ProbeOptions& opts)
{
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0))
            throw DomainError("eps grid must be positive");
        if (i > 0 && !(eps_grid[i] < eps_grid[i - 1]))
            throw DomainError("eps grid must be strictly decreasing");
    }

    RobustnessReport rep;
    rep.metric = metric;
    rep.rho = rho;
    rep.p = p;
    rep.family = family.name();
    rep.eps_grid = eps_grid;
    rep.solution_meta = g.meta();
    if (!g.meta().unique)
        rep.notes.push_back("uniqueness of the optimizer is not established; the probe tests the returned "
                            "representative only");

    const auto& segs = g.segments();
    const std::size_t n = opts.n_samples;
    const double rho_x = rho_of(rho, g, model.x(), p);

    std::optional<double> mc_rho_x;
    if (n > 0) {
        std::vector<double> xs(n), gx(n);
        kernels::fill_uniform(opts.seed, kernels::kStreamX, xs);
        const auto& x = model.x();
        kernels::transform(xs, xs, [&](double u) { return x.from_uniform(u); });
        kernels::evaluate(segs, xs, gx);
        mc_rho_x = rho_samples(rho, gx, p);
    }

    rep.points.resize(eps_grid.size());
    std::vector<std::string> point_notes(eps_grid.size());
    std::vector<std::exception_ptr> errors(eps_grid.size());
    const long m = static_cast<long>(eps_grid.size());

#pragma omp parallel for schedule(static, 1)
    for (long i = 0; i < m; ++i) {
        try {
            const double eps = eps_grid[static_cast<std::size_t>(i)];
            ProbePoint pt;
            pt.eps = eps;
            pt.rho_at_x = rho_x;

            bool analytic = false;
            try {
                auto law = family.law(model, eps);
                pt.rho_at_z = rho_of(rho, g, *law, p);
                analytic = !std::isnan(pt.rho_at_z);
            } catch (const NumericError& e) {
                point_notes[i] = std::string("exact pushforward failed: ") + e.what();
            }

            if (n > 0) {
                std::vector<double> xs(n), zs(n), gz(n);
                family.sample(model, eps, opts.seed, xs, zs);
                kernels::evaluate(segs, zs, gz);
                auto st = mc_rho(rho, gz, p, opts.batches);
                pt.mc_rho_at_z = st.value;
                pt.mc_stderr = st.stderr_;
                if (metric.kind != MetricKind::Kind::Prokhorov)
                    pt.measured_distance = coupled_distance(metric, xs, zs);
            }

            if (analytic) {
                pt.method = "analytic";
                pt.stderr_used = 0;
            } else if (pt.mc_rho_at_z) {
                pt.method = "monte_carlo";
                pt.rho_at_z = *pt.mc_rho_at_z;
                pt.rho_at_x = *mc_rho_x;
                pt.stderr_used = pt.mc_stderr;
            } else {
                throw NumericError("no exact pushforward and Monte Carlo disabled", NAN);
            }
            pt.gap = pt.rho_at_z - pt.rho_at_x;

            if (auto d = family.distance(model, metric, eps)) {
                pt.distance = d->value;
                pt.distance_exact = d->exact;
            } else if (pt.measured_distance) {
                pt.distance = *pt.measured_distance;
            } else {
                throw NumericError("no distance available for this family and metric", NAN);
            }

            if (opts.resolve) {
                if (auto zd = family.parametric(model, eps)) {
                    try {
                        MarketModel mz(*zd, model.gamma());
                        auto gz_sol = solve(mz, opts.resolve->spec, rho, opts.resolve->dro_epsilon);
                        double ideal = rho_of(rho, gz_sol, *zd, p);
                        pt.optimality_gap = ideal - pt.rho_at_z;
                        pt.optimality_shift = ideal - pt.rho_at_x;
                    } catch (const std::exception& e) {
                        point_notes[i] += std::string(point_notes[i].empty() ? "" : "; ") +
                                          "re-solve at Z failed: " + e.what();
                    }
                }
            }
            rep.points[i] = std::move(pt);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    for (std::size_t i = 0; i < point_notes.size(); ++i)
        if (!point_notes[i].empty()) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "eps = %.6g: ", eps_grid[i]);
            rep.notes.push_back(buf + point_notes[i]);
        }

    std::vector<double> d, gaps, se;
    for (const auto& pt : rep.points) {
        d.push_back(pt.distance);
        gaps.push_back(pt.gap);
        se.push_back(pt.stderr_used);
    }
    auto v = decide_verdict(d, gaps, se);
    rep.verdict = v.verdict;
    rep.limit_gap_estimate = v.limit_gap_estimate;
    rep.threshold = v.threshold;
    rep.verdict_reason = v.reason;
    return rep;
}

RhoContinuity RhoContinuity::of(Rho rho)
{
    // VaR is continuous in none of the three; ES in L-infinity and Lq but not weakly.
    if (rho == Rho::ES)
        return {true, true, false};
    return {};
}

Guarantee check_continuity_criterion(const SolutionFunction& g, RhoContinuity rc, const MetricKind& metric)
{
    auto c = g.continuity();
    bool continuous = c != Continuity::Discontinuous;
    bool ok = false;
    switch (metric.kind) {
    case MetricKind::Kind::LInf: ok = continuous && rc.linf; break;
    case MetricKind::Kind::Lq: ok = c == Continuity::ContinuousLinearGrowth && rc.lq; break;
    case MetricKind::Kind::Prokhorov: ok = continuous && rc.prokhorov; break;
    }
    return ok ? Guarantee::GuaranteedRobust : Guarantee::NoGuarantee;
}

} // namespace robopt
