#include "robopt/errors.hpp"
#include "robopt/market_model.hpp"
#include "robopt/kernels.hpp"
#include "robopt/risk_measures.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace robopt;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("quantile examples")
{
    CHECK(quantile(ScalarDistribution::uniform(0, 1), 0.5) == 0.5);
    CHECK_THAT(quantile(ScalarDistribution::exponential(1), 0.9), WithinAbs(-std::log(0.1), 1e-12));
    CHECK(quantile(ScalarDistribution::empirical({3, 1, 2}), 0.5) == 2);
    CHECK_THROWS_AS(quantile(ScalarDistribution::uniform(0, 1), 0.0), DomainError);
    CHECK_THROWS_AS(quantile(ScalarDistribution::uniform(0, 1), 1.0), DomainError);
}

TEST_CASE("empirical quantile is the ceil(nt)-th order statistic")
{
    std::vector<double> v{5, 1, 4, 2, 3, 9, 7};
    auto d = ScalarDistribution::empirical(v);
    std::sort(v.begin(), v.end());
    for (double t : {0.01, 0.1, 1.0 / 7, 0.3, 0.5, 4.0 / 7, 0.9, 0.99}) {
        auto k = static_cast<std::size_t>(std::ceil(7 * t - 1e-12));
        CHECK(quantile(d, t) == v[k - 1]);
    }
}

TEST_CASE("quantile inverts the cdf on the support interior")
{
    std::vector<ScalarDistribution> laws{ScalarDistribution::uniform(0.5, 3), ScalarDistribution::exponential(2),
                                         ScalarDistribution::lognormal(0.3, 0.7), ScalarDistribution::pareto(2.5, 1.5),
                                         ScalarDistribution::exponential(1).shifted(0.4).scaled(1.7)};
    for (const auto& d : laws)
        for (double t = 0.01; t < 1; t += 0.0137) {
            double x = d.quantile(t);
            CHECK_THAT(d.quantile(d.cdf(x)), WithinAbs(x, 1e-9 * std::max(1.0, x)));
            CHECK(d.cdf(x) >= t - 1e-12);
        }
}

TEST_CASE("cdf is nondecreasing and empirical weights must sum to one")
{
    CHECK_THROWS_AS(ScalarDistribution::empirical({0.2, 0.2, 1.0, 3.0}, {1, 2, 3, 4}), DomainError);
    auto e = ScalarDistribution::empirical({3.0, 0.2, 1.0, 0.2}, {0.4, 0.1, 0.3, 0.2});
    double s = 0;
    for (double w : e.atom_weights())
        s += w;
    CHECK_THAT(s, WithinAbs(1.0, 1e-12));
    CHECK(std::is_sorted(e.atom_values().begin(), e.atom_values().end()));
    auto l = ScalarDistribution::lognormal(0, 1);
    double prev = 0;
    for (double x = -1; x < 20; x += 0.05) {
        double f = l.cdf(x);
        CHECK(f >= prev);
        prev = f;
    }
}

TEST_CASE("distribution parameters are validated")
{
    CHECK_THROWS_AS(ScalarDistribution::uniform(1, 1), DomainError);
    CHECK_THROWS_AS(ScalarDistribution::exponential(0), DomainError);
    CHECK_THROWS_AS(ScalarDistribution::pareto(1.0, 1), DomainError);
    CHECK_THROWS_AS(ScalarDistribution::lognormal(0, -1), DomainError);
    CHECK_THROWS_AS(ScalarDistribution::empirical({}), DomainError);
}

TEST_CASE("expect_gamma_indicator examples")
{
    MarketModel ex(ScalarDistribution::exponential(1), PricingDensity::linear(0, 1));
    double c = 2.302585;
    CHECK_THAT(expect_gamma_indicator(ex, IntervalSet::above(c)), WithinAbs((c + 1) * std::exp(-c), 1e-12));
    MarketModel un(ScalarDistribution::uniform(0, 1), PricingDensity::constant());
    CHECK_THAT(expect_gamma_indicator(un, IntervalSet::between(0.9, 1)), WithinAbs(0.1, 1e-14));
    CHECK(expect_gamma_indicator(un, IntervalSet{}) == 0);
}

TEST_CASE("expect_gamma_indicator agrees with Monte Carlo")
{
    MarketModel ex(ScalarDistribution::exponential(1), PricingDensity::linear(0, 1));
    const std::size_t n = 2'000'000;
    std::vector<double> u(n);
    kernels::fill_uniform(99, kernels::kStreamX, u);
    double c = 2.302585, s = 0, ss = 0;
    for (double v : u) {
        double x = ex.x().from_uniform(v);
        double t = x > c ? x : 0.0;
        s += t;
        ss += t * t;
    }
    double mean = s / n, se = std::sqrt((ss / n - mean * mean) / n);
    CHECK(std::fabs(mean - expect_gamma_indicator(ex, IntervalSet::above(c))) < 3 * se);
}

TEST_CASE("gamma is normalised and partitions sum to one")
{
    std::vector<MarketModel> models{
        MarketModel(ScalarDistribution::uniform(0, 1), PricingDensity::constant()),
        MarketModel(ScalarDistribution::exponential(1), PricingDensity::linear(0, 1)),
        MarketModel(ScalarDistribution::exponential(1), PricingDensity::linear(1, 3)),
        MarketModel(ScalarDistribution::lognormal(0, 0.5), PricingDensity::power(-0.5, 2.0)),
        MarketModel(ScalarDistribution::pareto(3, 1), PricingDensity::power(0.5)),
        MarketModel(ScalarDistribution::uniform(0.1, 2), PricingDensity::custom([](double x) { return 1 / x; },
                                                                                Monotonicity::Decreasing)),
    };
    for (const auto& m : models) {
        CHECK_THAT(m.gamma_mass(IntervalSet::all()), WithinAbs(1.0, 1e-8));
        std::vector<double> cuts{-kInf, m.x().quantile(0.1), m.x().quantile(0.5), m.x().quantile(0.97), kInf};
        double s = 0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            s += expect_gamma_indicator(m, IntervalSet::between(cuts[i], cuts[i + 1]));
        CHECK_THAT(s, WithinAbs(1.0, 1e-8));
    }
}

TEST_CASE("unnormalised gamma is rescaled with a warning")
{
    MarketModel m(ScalarDistribution::uniform(0, 1), PricingDensity::constant(2.0));
    CHECK_THAT(m.gamma()(0.3), WithinAbs(1.0, 1e-15));
    CHECK_FALSE(m.warning().empty());
    MarketModel ok(ScalarDistribution::uniform(0, 1), PricingDensity::constant(1.0));
    CHECK(ok.warning().empty());
}

TEST_CASE("nonpositive gamma is rejected")
{
    CHECK_THROWS_AS(MarketModel(ScalarDistribution::uniform(0, 1), PricingDensity::linear(-0.5, 1)), DomainError);
}

TEST_CASE("check_assumptions examples")
{
    MarketModel un(ScalarDistribution::uniform(0, 1), PricingDensity::constant());
    auto r1 = check_assumptions(un, 0.9);
    CHECK(r1.holds("A"));
    CHECK(r1.holds("E1"));
    CHECK(r1.get("V1").status == CheckStatus::Deferred);
    CHECK(r1.get("V2").status == CheckStatus::Deferred);

    MarketModel ex(ScalarDistribution::exponential(1), PricingDensity::linear(0, 1));
    auto r2 = check_assumptions(ex, 0.9);
    CHECK(r2.get("E1").status == CheckStatus::Fails);
    CHECK(r2.holds("V3"));
    CHECK(r2.holds("E2"));

    // increasing density breaks the structural part of V3
    MarketModel ln(ScalarDistribution::lognormal(0, 1), PricingDensity::linear(0, 1).rescaled(1 / std::exp(0.5)));
    CHECK(check_assumptions(ln, 0.9).get("V3").status == CheckStatus::Fails);
    // p < 1/2 breaks it too
    CHECK(check_assumptions(ex, 0.4).get("V3").status == CheckStatus::Fails);
}

TEST_CASE("empirical quantile from a large sample matches the analytic quantile")
{
    auto x = ScalarDistribution::lognormal(0, 1);
    const std::size_t n = 1'000'000;
    std::vector<double> s(n);
    kernels::fill_uniform(5, kernels::kStreamX, s);
    kernels::transform(s, s, [&](double u) { return x.from_uniform(u); });
    for (double p : {0.5, 0.9, 0.99}) {
        double q = x.quantile(p);
        double se = std::sqrt(p * (1 - p) / n) / x.pdf(q);
        CHECK(std::fabs(var(s, RiskLevel(p)) - q) < 3 * se);
    }
}

TEST_CASE("gamma level sets and quantiles")
{
    MarketModel ex(ScalarDistribution::exponential(1), PricingDensity::linear(0, 1));
    CHECK_THAT(ex.var_gamma(0.9), WithinAbs(-std::log(0.1), 1e-12));
    CHECK(ex.gamma_above(3.0) == IntervalSet::above(3.0));
    MarketModel dec(ScalarDistribution::uniform(0.1, 2), PricingDensity::custom([](double x) { return 1 / x; },
                                                                              Monotonicity::Decreasing));
    auto s = dec.gamma_above(dec.gamma()(1.0));
    CHECK(s.contains(0.5));
    CHECK_FALSE(s.contains(1.5));
}
