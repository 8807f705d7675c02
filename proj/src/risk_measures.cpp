#include "robopt/risk_measures.hpp"

#include "robopt/errors.hpp"
#include "robopt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace robopt {

RiskLevel::RiskLevel(double p) : p_(p)
{
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("risk level must lie strictly between 0 and 1");
}

std::string to_string(Rho r)
{
    return r == Rho::VaR ? "var" : "es";
}

Rho rho_from_string(const std::string& s)
{
    if (s == "var" || s == "VaR")
        return Rho::VaR;
    if (s == "es" || s == "ES")
        return Rho::ES;
    throw DomainError("unknown risk measure '" + s + "'");
}

double var(const Law& law, RiskLevel p)
{
    return law.quantile(p);
}

double es(const Law& law, RiskLevel p)
{
    double v = law.quantile(p);
    double tail = law.first_moment(v, kInf);
    if (!std::isfinite(tail))
        return kInf;
    double excess = std::max(0.0, tail - v * law.prob(v, kInf));
    return v + excess / (1 - p);
}

std::size_t order_index(std::size_t n, double p)
{
    auto k = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * p * (1 - 1e-12)));
    return std::clamp<std::size_t>(k, 1, n);
}

double var(std::span<const double> samples, RiskLevel p)
{
    if (samples.empty())
        throw DomainError("empty sample");
    std::vector<double> v(samples.begin(), samples.end());
    auto k = order_index(v.size(), p);
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k - 1), v.end());
    return v[k - 1];
}

double es(std::span<const double> samples, RiskLevel p)
{
    if (samples.empty())
        throw DomainError("empty sample");
    std::vector<double> v(samples.begin(), samples.end());
    auto n = v.size();
    auto k = order_index(n, p);
    auto kth = v.begin() + static_cast<std::ptrdiff_t>(k - 1);
    std::nth_element(v.begin(), kth, v.end());
    std::sort(kth + 1, v.end());
    // accumulate excesses over the order statistic so a constant sample gives
    // its value back exactly
    double excess = 0;
    for (auto it = kth + 1; it != v.end(); ++it)
        excess += *it - *kth;
    return *kth + excess / (static_cast<double>(n) * (1 - p));
}

double ess_sup(const Law& law)
{
    return law.support().second;
}

double pushforward_cdf(const std::vector<Segment>& g, const Law& law, double t)
{
    double total = 0;
    for (const auto& s : g) {
        if (s.slope > 0) {
            double u = std::min(s.hi, (t - s.intercept) / s.slope);
            if (u > s.lo)
                total += law.prob(s.lo, u);
        } else if (s.intercept <= t) {
            total += law.prob(s.lo, s.hi);
        }
    }
    return total;
}

double expected_excess(const std::vector<Segment>& g, const Law& law, double v)
{
    double total = 0;
    for (const auto& s : g) {
        if (s.slope > 0) {
            double l = std::max(s.lo, (v - s.intercept) / s.slope);
            if (!(l < s.hi))
                continue;
            double m1 = law.first_moment(l, s.hi);
            if (!std::isfinite(m1))
                return kInf;
            total += (s.intercept - v) * law.prob(l, s.hi) + s.slope * m1;
        } else if (s.intercept > v) {
            total += (s.intercept - v) * law.prob(s.lo, s.hi);
        }
    }
    return std::max(0.0, total);
}

namespace {

double pushforward_var(const SolutionFunction& g, const Law& law, double p)
{
    const auto& segs = g.segments();
    auto pred = [&](double t) { return pushforward_cdf(segs, law, t) >= p - kProbTol; };

    double lo = -1.0, hi = 1.0;
    for (int i = 0; pred(lo); ++i) {
        lo *= 2;
        if (i > 1100)
            throw NumericError("pushforward VaR: no lower bracket", lo);
    }
    for (int i = 0; !pred(hi); ++i) {
        hi *= 2;
        if (i > 1100)
            throw NumericError("pushforward VaR: no upper bracket", hi);
    }
    double t = numerics::first_true(pred, lo, hi);

    // snap onto an exact level of g when bisection lands within rounding of it
    std::vector<double> cands = g.level_values();
    auto atoms = law.atoms();
    if (atoms.size() <= 20000)
        for (double a : atoms)
            cands.push_back(g(a));
    double best = t;
    for (double c : cands)
        if (c < best && std::fabs(c - t) <= 1e-9 * (1 + std::fabs(c)) && pred(c))
            best = c;
    return best;
}

} // namespace

double var_of(const SolutionFunction& g, const Law& law, RiskLevel p)
{
    return pushforward_var(g, law, p);
}

double es_of(const SolutionFunction& g, const Law& law, RiskLevel p)
{
    double v = pushforward_var(g, law, p);
    double ex = expected_excess(g.segments(), law, v);
    if (!std::isfinite(ex))
        return kInf;
    return v + ex / (1 - p);
}

double rho_of(Rho rho, const SolutionFunction& g, const Law& law, RiskLevel p)
{
    return rho == Rho::VaR ? var_of(g, law, p) : es_of(g, law, p);
}

double rho_samples(Rho rho, std::span<const double> samples, RiskLevel p)
{
    return rho == Rho::VaR ? var(samples, p) : es(samples, p);
}

double es_dual_check(const ScalarDistribution& y, RiskLevel p, const std::function<double(double)>& b,
                     std::vector<double> breakpoints)
{
    const double cap = 1 / (1 - p.value());
    double mass = 0, value = 0;
    if (y.family() == Family::Empirical) {
        const auto& v = y.atom_values();
        const auto& w = y.atom_weights();
        for (std::size_t i = 0; i < v.size(); ++i) {
            double bi = b(v[i]);
            if (bi < -1e-8)
                throw DomainError("candidate density violates B >= 0");
            if (bi > cap + 1e-8)
                throw DomainError("candidate density violates B <= 1/(1-p)");
            mass += w[i] * bi;
            value += w[i] * bi * v[i];
        }
    } else {
        auto [lo, hi] = y.support();
        std::vector<double> cuts{lo};
        for (double t : breakpoints)
            if (t > lo && t < hi)
                cuts.push_back(t);
        cuts.push_back(hi);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            for (int j = 1; j < 64; ++j) {
                double a = cuts[i], c = cuts[i + 1];
                double x = std::isfinite(c) ? a + (c - a) * j / 64.0 : a + j;
                double bi = b(x);
                if (bi < -1e-8)
                    throw DomainError("candidate density violates B >= 0");
                if (bi > cap + 1e-8)
                    throw DomainError("candidate density violates B <= 1/(1-p)");
            }
            mass += numerics::integrate([&](double x) { return b(x) * y.pdf(x); }, cuts[i], cuts[i + 1], 1e-11);
            value += numerics::integrate([&](double x) { return b(x) * x * y.pdf(x); }, cuts[i], cuts[i + 1], 1e-11);
        }
    }
    if (std::fabs(mass - 1) > 1e-8)
        throw DomainError("candidate density violates E[B] = 1");
    return value;
}

} // namespace robopt
