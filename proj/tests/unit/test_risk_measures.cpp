#include "golden.hpp"
#include "robopt/errors.hpp"
#include "robopt/kernels.hpp"
#include "robopt/risk_measures.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace robopt;
using Catch::Matchers::WithinAbs;

namespace {

ScalarDistribution law_named(const std::string& n)
{
    if (n == "uniform")
        return ScalarDistribution::uniform(0, 1);
    if (n == "exponential")
        return ScalarDistribution::exponential(1);
    return ScalarDistribution::lognormal(0, 1);
}

std::vector<double> draw(const ScalarDistribution& x, std::size_t n, std::uint64_t seed)
{
    std::vector<double> s(n);
    kernels::fill_uniform(seed, kernels::kStreamX, s);
    kernels::transform(s, s, [&](double u) { return x.from_uniform(u); });
    return s;
}

} // namespace

TEST_CASE("analytic VaR and ES match the quadrature oracle")
{
    for (const auto& row : golden::kRiskTable) {
        auto x = law_named(row.law);
        RiskLevel p(row.p);
        INFO(row.law << " p=" << row.p);
        CHECK_THAT(var(x, p), WithinAbs(row.var, 1e-8));
        CHECK_THAT(es(x, p), WithinAbs(row.es, 1e-8));
    }
}

TEST_CASE("spec examples for var and es")
{
    CHECK_THAT(var(ScalarDistribution::uniform(0, 1), RiskLevel(0.9)), WithinAbs(0.9, 1e-12));
    std::vector<double> s{0, 0, 0, 10};
    CHECK(var(s, RiskLevel(0.5)) == 0);
    CHECK(var(ScalarDistribution::point_mass(5), RiskLevel(0.3)) == 5);
    CHECK_THAT(es(ScalarDistribution::uniform(0, 1), RiskLevel(0.9)), WithinAbs(0.95, 1e-12));
    CHECK_THAT(es(ScalarDistribution::exponential(1), RiskLevel(0.9)), WithinAbs(1 - std::log(0.1), 1e-10));
    for (double p : {0.01, 0.5, 0.999})
        CHECK(es(ScalarDistribution::point_mass(5), RiskLevel(p)) == 5);
    std::vector<double> empty;
    CHECK_THROWS_AS(var(empty, RiskLevel(0.5)), DomainError);
    CHECK_THROWS_AS(es(empty, RiskLevel(0.5)), DomainError);
    CHECK_THROWS_AS(RiskLevel(1.0), DomainError);
    CHECK_THROWS_AS(RiskLevel(0.0), DomainError);
}

TEST_CASE("empirical estimators match analytic values within 3 standard errors")
{
    const std::size_t n = 1'000'000;
    for (const char* name : {"uniform", "exponential", "lognormal"}) {
        auto x = law_named(name);
        auto s = draw(x, n, 17);
        for (double pv : {0.5, 0.9, 0.99}) {
            RiskLevel p(pv);
            INFO(name << " p=" << pv);
            double q = x.quantile(pv);
            double se_var = std::sqrt(pv * (1 - pv) / n) / x.pdf(q);
            CHECK(std::fabs(var(s, p) - var(x, p)) < 3 * se_var);
            // batch means for the ES standard error
            auto b = kernels::batch_rho(Rho::ES, s, p, 50);
            double m = 0, ss = 0;
            for (double v : b)
                m += v / b.size();
            for (double v : b)
                ss += (v - m) * (v - m);
            double se_es = std::sqrt(ss / (b.size() - 1) / b.size());
            CHECK(std::fabs(es(s, p) - es(x, p)) < 3 * se_es);
        }
    }
}

TEST_CASE("empirical ES formula on a small sample")
{
    std::vector<double> s{4, 1, 3, 2, 5};
    // p = 0.5: k = 3, (3/5 - 0.5) * 3 + (4 + 5)/5 over 0.5
    CHECK_THAT(es(s, RiskLevel(0.5)), WithinAbs(((0.6 - 0.5) * 3 + 9.0 / 5) / 0.5, 1e-14));
    CHECK(var(s, RiskLevel(0.5)) == 3);
    CHECK(order_index(10, 0.3) == 3);
    CHECK(order_index(10, 0.30000000000000004) == 3);
}

namespace {

// Pareto tail with index 1: no mean
class NoMean : public Law {
public:
    double prob(double lo, double hi) const override
    {
        auto f = [](double x) { return x <= 1 ? 0.0 : 1 - 1 / x; };
        return lo < hi ? f(hi) - f(lo) : 0.0;
    }
    double first_moment(double lo, double hi) const override
    {
        lo = std::max(lo, 1.0);
        return lo < hi ? std::log(hi) - std::log(lo) : 0.0;
    }
    std::pair<double, double> support() const override { return {1.0, kInf}; }
    std::vector<double> atoms() const override { return {}; }
};

} // namespace

TEST_CASE("ES is infinite on a law without a mean")
{
    NoMean law;
    RiskLevel p(0.9);
    CHECK_THAT(var(law, p), WithinAbs(10.0, 1e-9));
    CHECK(std::isinf(es(law, p)));
    CHECK(es(law, p) > 0);
}

TEST_CASE("translation, homogeneity, dominance and monotonicity on samples")
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 1 + rng() % 60;
        std::vector<double> y(n), y2(n), sh(n), sc(n), up(n);
        double a = nd(rng), lam = std::exp(nd(rng));
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = nd(rng);
            y2[i] = nd(rng);
            sh[i] = y[i] + a;
            sc[i] = lam * y[i];
            up[i] = y[i] + std::fabs(nd(rng));
        }
        RiskLevel p(0.05 + 0.9 * std::uniform_real_distribution<double>()(rng));
        CHECK(var(sh, p) == var(y, p) + a);
        CHECK_THAT(es(sh, p), WithinAbs(es(y, p) + a, 1e-12 * (1 + std::fabs(a) + std::fabs(es(y, p)))));
        CHECK_THAT(var(sc, p), WithinAbs(lam * var(y, p), 1e-12 * lam * (1 + std::fabs(var(y, p)))));
        CHECK_THAT(es(sc, p), WithinAbs(lam * es(y, p), 1e-12 * lam * (1 + std::fabs(es(y, p)))));
        CHECK(es(y, p) >= var(y, p) - 1e-12);
        CHECK(var(up, p) >= var(y, p));
        CHECK(es(up, p) >= es(y, p) - 1e-12);
    }
}

TEST_CASE("ES is subadditive on random sample pairs")
{
    std::mt19937_64 rng(8);
    std::exponential_distribution<double> ed;
    for (int t = 0; t < 1000; ++t) {
        std::size_t n = 2 + rng() % 40;
        std::vector<double> a(n), b(n), s(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = ed(rng) - 1;
            b[i] = (rng() % 2 ? 1 : -1) * ed(rng);
            s[i] = a[i] + b[i];
        }
        RiskLevel p(0.5 + 0.49 * std::uniform_real_distribution<double>()(rng));
        CHECK(es(s, p) <= es(a, p) + es(b, p) + 1e-10);
    }
}

TEST_CASE("analytic translation and homogeneity")
{
    auto x = ScalarDistribution::lognormal(0.2, 0.6);
    RiskLevel p(0.9);
    CHECK_THAT(var(x.shifted(1.5), p), WithinAbs(var(x, p) + 1.5, 1e-10));
    CHECK_THAT(es(x.shifted(1.5), p), WithinAbs(es(x, p) + 1.5, 1e-10));
    CHECK_THAT(es(x.scaled(2.5), p), WithinAbs(2.5 * es(x, p), 1e-10));
}

TEST_CASE("es_dual_check examples")
{
    auto y = ScalarDistribution::uniform(0, 1);
    RiskLevel p(0.9);
    CHECK_THAT(es_dual_check(y, p, [](double) { return 1.0; }), WithinAbs(0.5, 1e-12));
    double v = var(y, p);
    double attained = es_dual_check(y, p, [&](double x) { return x > v ? 10.0 : 0.0; }, {v});
    CHECK_THAT(attained, WithinAbs(0.95, 1e-6));
    CHECK_THROWS_AS(es_dual_check(y, p, [](double) { return 0.9; }), DomainError);
    // E[B] = 1 but B exceeds 1/(1-p)
    CHECK_THROWS_AS(es_dual_check(y, p, [](double x) { return x > 0.95 ? 20.0 : 0.0; }, {0.95}), DomainError);
}

TEST_CASE("dual check lower-bounds ES")
{
    auto y = ScalarDistribution::exponential(1);
    RiskLevel p(0.8);
    // B = 1/(1-p) on a set of probability 1-p that is not the tail
    double a = y.quantile(0.5), b = y.quantile(0.7);
    double lb = es_dual_check(y, p, [&](double x) { return (x > a && x <= b) ? 5.0 : 0.0; }, {a, b});
    CHECK(lb <= es(y, p));
}

TEST_CASE("ES diverges under vanishing tail spikes while VaR converges")
{
    auto x = ScalarDistribution::uniform(0, 1);
    RiskLevel p(0.9);
    for (int n : {2, 4, 8, 16, 32}) {
        // spike of mass (1-p)/2 and height n^2, scaled by 1/n
        double mass = (1 - p) / 2, h = n * n;
        std::vector<double> s = draw(x, 200'000, 11);
        double v = x.quantile(1 - mass);
        for (auto& z : s)
            if (z > v)
                z += h / n;
        CHECK(es(s, p) > es(x, p) + 0.4 * n);
        CHECK_THAT(var(s, p), WithinAbs(var(x, p), 5e-3));
    }
}
