#include "golden.hpp"
#include "robopt/dro_optimizer.hpp"
#include "robopt/errors.hpp"
#include "robopt/es_optimizers.hpp"
#include "robopt/robustness_probe.hpp"
#include "robopt/var_optimizers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace robopt;
using Catch::Matchers::WithinAbs;

namespace {

MarketModel uniform_model()
{
    return MarketModel(ScalarDistribution::uniform(0, 1), PricingDensity::constant());
}

MarketModel exp_model()
{
    return MarketModel(ScalarDistribution::exponential(1), PricingDensity::linear(0, 1));
}

ProblemSpec spec(double p, double x0, Constraint c, double m = NAN)
{
    ProblemSpec s{RiskLevel(p)};
    s.x0 = x0;
    s.constraint = c;
    s.m = m;
    return s;
}

ProbeOptions opts(std::size_t n = 200'000)
{
    ProbeOptions o;
    o.n_samples = n;
    o.seed = 42;
    return o;
}

const std::vector<double> kGrid{0.1, 0.01, 0.001};
const std::vector<MetricKind> kMetrics{MetricKind::linf(), MetricKind::lq(2), MetricKind::prokhorov()};

} // namespace

TEST_CASE("verdict rule on synthetic curves")
{
    std::vector<double> d{0.1, 0.01, 0.001}, zero{0, 0, 0};
    CHECK(decide_verdict(d, {0.87, 0.78, 0.775}, zero).verdict == Verdict::NonRobust);
    CHECK(decide_verdict(d, {0.1, 0.01, 0.001}, zero).verdict == Verdict::Robust);
    CHECK(decide_verdict(d, {0, 0, 0}, zero).verdict == Verdict::Robust);
    CHECK(decide_verdict(d, {50, 500, 5000}, zero).verdict == Verdict::NonRobust);
    CHECK(decide_verdict(d, {-0.5, -0.5, -0.5}, zero).verdict == Verdict::NonRobust);
    // sign changes and noisy curves stay undecided
    CHECK(decide_verdict(d, {0.5, -0.5, 0.5}, zero).verdict == Verdict::Inconclusive);
    // noise swamps the gap: tau = 10 (0.1 + 1e-6)
    CHECK(decide_verdict(d, {0.3, 0.3, 0.3}, {0.1, 0.1, 0.1}).verdict == Verdict::Robust);
    CHECK(decide_verdict({0.1, 0.01}, {1, 1}, {0, 0}).verdict == Verdict::Inconclusive);
    CHECK(decide_verdict({0.1, 0.1, 0.01}, {1, 1, 1}, zero).verdict == Verdict::Inconclusive);
    auto v = decide_verdict(d, {0.87, 0.78, 0.775}, zero);
    CHECK_THAT(v.threshold, WithinAbs(1e-5, 1e-18));
    CHECK(v.limit_gap_estimate > 0.7);
}

TEST_CASE("VaR solution under a shift is not robust")
{
    auto m = uniform_model();
    auto s = spec(0.9, 0.2, Constraint::NoShortSelling);
    auto g = solve_var_ns(m, s);
    const double q = *g.meta().q;
    for (const auto& k : kMetrics) {
        auto r = probe(m, g, Rho::VaR, s.p, PerturbationFamily::shift(), k, kGrid, opts());
        INFO(k.name());
        CHECK(r.verdict == Verdict::NonRobust);
        for (const auto& pt : r.points) {
            CHECK(pt.method == "analytic");
            CHECK_THAT(pt.gap, WithinAbs(0.9 + pt.eps - q, 1e-9));
            CHECK(pt.gap > 0);
            REQUIRE(pt.mc_rho_at_z);
            CHECK(std::fabs(*pt.mc_rho_at_z - pt.rho_at_z) < 1e-2);
        }
        CHECK(check_continuity_criterion(g, RhoContinuity::of(Rho::VaR), k) == Guarantee::NoGuarantee);
    }
}

TEST_CASE("ES solution under a shift is robust")
{
    auto m = uniform_model();
    auto s = spec(0.9, 0.2, Constraint::NoShortSelling);
    auto g = solve_es_ns(m, s);
    for (const auto& k : {MetricKind::linf(), MetricKind::lq(2)}) {
        auto r = probe(m, g, Rho::ES, s.p, PerturbationFamily::shift(), k, kGrid, opts());
        CHECK(r.verdict == Verdict::Robust);
        for (const auto& pt : r.points)
            CHECK(std::fabs(pt.gap) <= pt.eps + 3 * pt.mc_stderr);
        CHECK(std::fabs(r.points.back().gap) < 1e-3);
    }
}

TEST_CASE("constant solutions have zero gap under every family")
{
    auto m = exp_model();
    auto g = SolutionFunction::constant(0.3);
    double a = m.x().quantile(0.9);
    // each family paired with a metric under which it converges to X; exponential
    // scaling is infinitely far in sup norm and the spike only shrinks weakly
    std::vector<std::pair<PerturbationFamily, MetricKind>> cases{
        {PerturbationFamily::shift(), MetricKind::linf()},
        {PerturbationFamily::scale(), MetricKind::lq(2)},
        {PerturbationFamily::lemma_a2(m, IntervalSet::above(a), 0.9), MetricKind::linf()},
        {PerturbationFamily::tail_spike(0.5), MetricKind::prokhorov()}};
    for (const auto& [f, k] : cases)
        for (Rho rho : {Rho::VaR, Rho::ES}) {
            auto r = probe(m, g, rho, RiskLevel(0.9), f, k, kGrid, opts(20'000));
            INFO(f.name() << " " << to_string(rho) << " " << r.verdict_reason);
            CHECK(r.verdict == Verdict::Robust);
            for (const auto& pt : r.points) {
                CHECK(pt.gap == 0);
                CHECK(*pt.mc_rho_at_z == 0.3);
            }
        }
}

TEST_CASE("families that do not approach X stay undecided")
{
    auto m = exp_model();
    auto g = SolutionFunction::constant(0.3);
    for (const auto& f : {PerturbationFamily::scale(), PerturbationFamily::tail_spike(0.5)}) {
        auto r = probe(m, g, Rho::ES, RiskLevel(0.9), f, MetricKind::linf(), kGrid, opts(20'000));
        CHECK(r.verdict == Verdict::Inconclusive);
    }
}

TEST_CASE("bounded VaR solution fails under the lemma family in every metric")
{
    auto m = exp_model();
    auto s = spec(0.9, 0.5, Constraint::Bounded, 1.0);
    auto g = solve_var_bd(m, s);
    auto fam = PerturbationFamily::lemma_a2_for(m, g, s.p);
    for (const auto& k : kMetrics) {
        auto r = probe(m, g, Rho::VaR, s.p, fam, k, kGrid, opts());
        CHECK(r.verdict == Verdict::NonRobust);
        for (const auto& pt : r.points)
            CHECK(pt.gap > 0.7);
    }
}

TEST_CASE("DRO solution is robust under L-infinity shifts within the radius")
{
    auto m = exp_model();
    DroSpec d{spec(0.9, 0.5, Constraint::Bounded, 1.0), 0.1};
    auto g = solve_dro_var_bd(m, d);
    auto r = probe(m, g, Rho::VaR, d.base.p, PerturbationFamily::shift(), MetricKind::linf(), {0.1, 0.05, 0.01, 0.001},
                   opts());
    CHECK(r.verdict == Verdict::Robust);
    for (const auto& pt : r.points)
        CHECK(pt.gap == 0);
    CHECK_FALSE(r.notes.empty());  // uniqueness is not established for this representative
}

TEST_CASE("tail spikes break ES under the weak metric")
{
    auto m = exp_model();
    auto s = spec(0.9, 0.5, Constraint::NoShortSelling);
    auto g = solve_es_ns(m, s);
    auto r = probe(m, g, Rho::ES, s.p, PerturbationFamily::tail_spike(0.5), MetricKind::prokhorov(), kGrid, opts());
    CHECK(r.verdict == Verdict::NonRobust);
    for (std::size_t i = 1; i < r.points.size(); ++i) {
        CHECK(r.points[i].distance < r.points[i - 1].distance);
        CHECK(r.points[i].gap > r.points[i - 1].gap);
    }
    CHECK(check_continuity_criterion(g, RhoContinuity::of(Rho::ES), MetricKind::prokhorov()) ==
          Guarantee::NoGuarantee);
}

TEST_CASE("optimality gap and shift are reported for parametric perturbations")
{
    auto m = uniform_model();
    auto s = spec(0.9, 0.2, Constraint::NoShortSelling);
    auto g = solve_var_ns(m, s);
    auto o = opts(10'000);
    o.resolve = ResolveContext{s, std::nullopt};
    auto r = probe(m, g, Rho::VaR, s.p, PerturbationFamily::shift(), MetricKind::linf(), kGrid, o);
    for (const auto& pt : r.points) {
        REQUIRE(pt.optimality_gap);
        REQUIRE(pt.optimality_shift);
        // the idealistic optimum is cheaper than carrying g_X into Z
        CHECK(*pt.optimality_gap < 0);
        CHECK_THAT(*pt.optimality_shift - *pt.optimality_gap, WithinAbs(pt.gap, 1e-12));
    }
    CHECK(r.verdict == Verdict::NonRobust);
}

TEST_CASE("probe is deterministic")
{
    auto m = exp_model();
    auto s = spec(0.9, 0.5, Constraint::Bounded, 1.0);
    auto g = solve_var_bd(m, s);
    auto fam = PerturbationFamily::lemma_a2_for(m, g, s.p);
    auto a = probe(m, g, Rho::VaR, s.p, fam, MetricKind::lq(2), kGrid, opts(50'000));
    auto b = probe(m, g, Rho::VaR, s.p, fam, MetricKind::lq(2), kGrid, opts(50'000));
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].gap == b.points[i].gap);
        CHECK(*a.points[i].mc_rho_at_z == *b.points[i].mc_rho_at_z);
        CHECK(a.points[i].mc_stderr == b.points[i].mc_stderr);
        CHECK(*a.points[i].measured_distance == *b.points[i].measured_distance);
    }
}

TEST_CASE("probe rejects a bad grid")
{
    auto m = uniform_model();
    auto g = SolutionFunction::constant(0.1);
    CHECK_THROWS_AS(probe(m, g, Rho::VaR, RiskLevel(0.9), PerturbationFamily::shift(), MetricKind::linf(),
                          {0.01, 0.1}, opts(100)),
                    DomainError);
    CHECK_THROWS_AS(probe(m, g, Rho::VaR, RiskLevel(0.9), PerturbationFamily::shift(), MetricKind::linf(),
                          {0.1, 0.0}, opts(100)),
                    DomainError);
}

TEST_CASE("continuity criterion over the shipped solution forms")
{
    auto um = uniform_model();
    auto em = exp_model();
    auto es_cap = solve_es_ns(um, spec(0.9, 0.2, Constraint::NoShortSelling));
    CHECK(check_continuity_criterion(es_cap, RhoContinuity::of(Rho::ES), MetricKind::lq(2)) ==
          Guarantee::GuaranteedRobust);
    CHECK(check_continuity_criterion(es_cap, RhoContinuity::of(Rho::ES), MetricKind::linf()) ==
          Guarantee::GuaranteedRobust);
    CHECK(check_continuity_criterion(es_cap, RhoContinuity::of(Rho::ES), MetricKind::prokhorov()) ==
          Guarantee::NoGuarantee);
    auto cm = solve_es_cm(um, spec(0.9, 0.2, Constraint::CompleteMarket));
    CHECK(check_continuity_criterion(cm, RhoContinuity::of(Rho::ES), MetricKind::lq(1)) ==
          Guarantee::GuaranteedRobust);

    std::vector<SolutionFunction> jumpy{
        solve_var_ns(um, spec(0.9, 0.2, Constraint::NoShortSelling)),
        solve_var_ns(um, spec(0.9, 0.05, Constraint::NoShortSelling)),
        solve_var_ns(em, spec(0.9, 1.0, Constraint::NoShortSelling)),
        solve_var_bd(em, spec(0.9, 0.5, Constraint::Bounded, 1.0)),
        solve_var_bd(em, spec(0.9, 0.3, Constraint::Bounded, 1.0)),
        solve_dro_var_bd(em, DroSpec{spec(0.9, 0.5, Constraint::Bounded, 1.0), 0.1}),
        var_cm_witness(um, spec(0.9, 0.2, Constraint::CompleteMarket), -3),
        solve_es_ns(em, spec(0.9, 0.5, Constraint::NoShortSelling)),
        solve_es_bd(em, spec(0.9, 0.5, Constraint::Bounded, 1.0)),
    };
    for (const auto& g : jumpy) {
        INFO(g.meta().form);
        REQUIRE_FALSE(g.jumps().empty());
        for (Rho rho : {Rho::VaR, Rho::ES})
            for (const auto& k : kMetrics)
                CHECK(check_continuity_criterion(g, RhoContinuity::of(rho), k) == Guarantee::NoGuarantee);
    }
}
