#include "robopt/market_model.hpp"

#include "robopt/errors.hpp"
#include "robopt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace robopt {

namespace {

std::string fmt(const char* f, double v)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

} // namespace

std::string to_string(Monotonicity m)
{
    switch (m) {
    case Monotonicity::Constant: return "constant";
    case Monotonicity::Increasing: return "increasing";
    case Monotonicity::Decreasing: return "decreasing";
    case Monotonicity::General: return "general";
    }
    return "?";
}

std::string to_string(CheckStatus s)
{
    switch (s) {
    case CheckStatus::Holds: return "holds";
    case CheckStatus::Fails: return "fails";
    case CheckStatus::Deferred: return "deferred";
    }
    return "?";
}

PricingDensity PricingDensity::constant(double a)
{
    if (!(a > 0))
        throw DomainError("constant pricing density must be positive");
    PricingDensity g;
    g.kind_ = Kind::Constant;
    g.a_ = a;
    return g;
}

PricingDensity PricingDensity::linear(double intercept, double slope)
{
    if (slope == 0.0)
        return constant(intercept);
    PricingDensity g;
    g.kind_ = Kind::Linear;
    g.a_ = intercept;
    g.b_ = slope;
    return g;
}

PricingDensity PricingDensity::power(double exponent, double coeff)
{
    if (!(coeff > 0))
        throw DomainError("power pricing density needs a positive coefficient");
    if (exponent == 0.0)
        return constant(coeff);
    PricingDensity g;
    g.kind_ = Kind::Power;
    g.a_ = coeff;
    g.b_ = exponent;
    return g;
}

PricingDensity PricingDensity::custom(std::function<double(double)> fn, Monotonicity mono)
{
    if (!fn)
        throw DomainError("custom pricing density needs a callable");
    PricingDensity g;
    g.kind_ = Kind::Custom;
    g.fn_ = std::move(fn);
    g.declared_ = mono;
    return g;
}

double PricingDensity::operator()(double x) const
{
    switch (kind_) {
    case Kind::Constant: return a_;
    case Kind::Linear: return a_ + b_ * x;
    case Kind::Power: return x > 0 ? a_ * std::pow(x, b_) : (b_ > 0 ? 0.0 : kInf);
    case Kind::Custom: return a_ * fn_(x);
    }
    return 0.0;
}

Monotonicity PricingDensity::monotonicity() const
{
    switch (kind_) {
    case Kind::Constant: return Monotonicity::Constant;
    case Kind::Linear:
    case Kind::Power: return b_ > 0 ? Monotonicity::Increasing : Monotonicity::Decreasing;
    case Kind::Custom: return declared_;
    }
    return Monotonicity::General;
}

PricingDensity PricingDensity::rescaled(double factor) const
{
    PricingDensity g = *this;
    if (kind_ == Kind::Linear)
        g.b_ *= factor;
    g.a_ *= factor;
    return g;
}

std::string PricingDensity::describe() const
{
    char buf[128];
    switch (kind_) {
    case Kind::Constant: std::snprintf(buf, sizeof buf, "gamma(x) = %.17g", a_); break;
    case Kind::Linear: std::snprintf(buf, sizeof buf, "gamma(x) = %.17g + %.17g x", a_, b_); break;
    case Kind::Power: std::snprintf(buf, sizeof buf, "gamma(x) = %.17g x^%.17g", a_, b_); break;
    case Kind::Custom: std::snprintf(buf, sizeof buf, "gamma(x) = %.17g f(x), f %s", a_, to_string(declared_).c_str()); break;
    }
    return buf;
}

const AssumptionCheck& AssumptionReport::get(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name)
            return c;
    throw DomainError("no assumption named " + name);
}

void AssumptionReport::set(AssumptionCheck c)
{
    for (auto& e : checks)
        if (e.name == c.name) {
            e = std::move(c);
            return;
        }
    checks.push_back(std::move(c));
}

MarketModel::MarketModel(ScalarDistribution x, PricingDensity gamma)
    : x_(std::move(x)), gamma_(std::move(gamma))
{
    auto [lo, hi] = x_.support();
    // positivity on the interior of the support
    for (int i = 1; i < 256; ++i) {
        double xi = x_.quantile(i / 256.0);
        double gi = gamma_(xi);
        if (!(gi > 0) && xi > lo)
            throw DomainError("pricing density must be positive on the support of X" +
                              fmt(" (gamma(%.6g) <= 0)", xi));
    }
    if (x_.family() == Family::Empirical)
        for (double v : x_.atom_values())
            if (!(gamma_(v) > 0))
                throw DomainError("pricing density must be positive at every atom of X");
    (void)hi;

    double total = gamma_mass(IntervalSet::all());
    if (!std::isfinite(total) || !(total > 0))
        throw DomainError("E[gamma(X)] is not a positive finite number");
    if (std::fabs(total - 1.0) > 1e-8) {
        gamma_ = gamma_.rescaled(1.0 / total);
        warning_ = fmt("pricing density rescaled by 1/%.17g so that E[gamma(X)] = 1", total);
    }
    double gx = gamma_first(IntervalSet::all());
    if (!std::isfinite(gx))
        throw DomainError("E[gamma(X) X] must be finite");
}

double MarketModel::prob(const IntervalSet& a) const
{
    double s = 0;
    for (const auto& iv : a.parts())
        s += x_.prob(iv.lo, iv.hi);
    return s;
}

double MarketModel::gamma_mass_interval(double lo, double hi) const
{
    switch (gamma_.kind()) {
    case PricingDensity::Kind::Constant:
        return gamma_.a() * x_.partial_moment(0, lo, hi);
    case PricingDensity::Kind::Linear:
        return gamma_.a() * x_.partial_moment(0, lo, hi) + gamma_.b() * x_.partial_moment(1, lo, hi);
    case PricingDensity::Kind::Power:
        return gamma_.a() * x_.partial_power_moment(gamma_.b(), lo, hi);
    case PricingDensity::Kind::Custom:
        break;
    }
    if (x_.family() == Family::Empirical) {
        double s = 0;
        const auto& v = x_.atom_values();
        const auto& w = x_.atom_weights();
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] > lo && v[i] <= hi)
                s += w[i] * gamma_(v[i]);
        return s;
    }
    auto [slo, shi] = x_.support();
    double l = std::max(lo, slo), h = std::min(hi, shi);
    return numerics::integrate([&](double x) { return gamma_(x) * x_.pdf(x); }, l, h);
}

double MarketModel::gamma_first_interval(double lo, double hi) const
{
    switch (gamma_.kind()) {
    case PricingDensity::Kind::Constant:
        return gamma_.a() * x_.partial_moment(1, lo, hi);
    case PricingDensity::Kind::Linear:
        return gamma_.a() * x_.partial_moment(1, lo, hi) + gamma_.b() * x_.partial_moment(2, lo, hi);
    case PricingDensity::Kind::Power:
        return gamma_.a() * x_.partial_power_moment(gamma_.b() + 1, lo, hi);
    case PricingDensity::Kind::Custom:
        break;
    }
    if (x_.family() == Family::Empirical) {
        double s = 0;
        const auto& v = x_.atom_values();
        const auto& w = x_.atom_weights();
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] > lo && v[i] <= hi)
                s += w[i] * gamma_(v[i]) * v[i];
        return s;
    }
    auto [slo, shi] = x_.support();
    double l = std::max(lo, slo), h = std::min(hi, shi);
    return numerics::integrate([&](double x) { return gamma_(x) * x * x_.pdf(x); }, l, h);
}

double MarketModel::gamma_mass(const IntervalSet& a) const
{
    double s = 0;
    for (const auto& iv : a.parts())
        s += gamma_mass_interval(iv.lo, iv.hi);
    return s;
}

double MarketModel::gamma_first(const IntervalSet& a) const
{
    double s = 0;
    for (const auto& iv : a.parts())
        s += gamma_first_interval(iv.lo, iv.hi);
    return s;
}

IntervalSet MarketModel::level_set_above(const std::function<double(double)>& h, double c) const
{
    auto [slo, shi] = x_.support();
    std::vector<double> grid;
    if (x_.family() == Family::Empirical) {
        grid = x_.atom_values();
    } else {
        constexpr int n = 4096;
        grid.push_back(slo);
        for (int i = 1; i < n; ++i)
            grid.push_back(x_.quantile(static_cast<double>(i) / n));
        grid.push_back(std::isfinite(shi) ? shi : x_.quantile(1 - 1e-12));
    }
    std::vector<Interval> parts;
    bool inside = h(grid[0]) > c;
    double start = -kInf;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        bool now = h(grid[i]) > c;
        if (now == inside)
            continue;
        double edge;
        if (x_.family() == Family::Empirical) {
            edge = grid[i - 1];
        } else if (now) {
            // last x with h <= c
            edge = numerics::first_true([&](double x) { return h(x) > c; }, grid[i - 1], grid[i]);
            edge = std::nextafter(edge, -kInf);
        } else {
            edge = numerics::first_true([&](double x) { return h(x) <= c; }, grid[i - 1], grid[i]);
            edge = std::nextafter(edge, -kInf);
        }
        if (now)
            start = edge;
        else
            parts.push_back({start, edge});
        inside = now;
    }
    if (inside)
        parts.push_back({start, kInf});
    return IntervalSet(std::move(parts));
}

IntervalSet MarketModel::gamma_above(double c) const
{
    const auto& g = gamma_;
    switch (g.kind()) {
    case PricingDensity::Kind::Constant:
        return g.a() > c ? IntervalSet::all() : IntervalSet();
    case PricingDensity::Kind::Linear: {
        double t = (c - g.a()) / g.b();
        if (g.b() > 0)
            return IntervalSet::above(t);
        return IntervalSet::at_most(std::nextafter(t, -kInf));
    }
    case PricingDensity::Kind::Power: {
        if (c <= 0)
            return IntervalSet::above(0.0);
        double t = std::pow(c / g.a(), 1.0 / g.b());
        if (g.b() > 0)
            return IntervalSet::above(t);
        return IntervalSet::between(0.0, std::nextafter(t, -kInf));
    }
    case PricingDensity::Kind::Custom:
        break;
    }
    return level_set_above([&](double x) { return g(x); }, c);
}

double MarketModel::gamma_ess_sup() const
{
    auto [lo, hi] = x_.support();
    switch (gamma_.monotonicity()) {
    case Monotonicity::Constant: return gamma_(lo);
    case Monotonicity::Increasing: return std::isfinite(hi) ? gamma_(hi) : kInf;
    case Monotonicity::Decreasing: return gamma_(lo);
    case Monotonicity::General: break;
    }
    double best = 0;
    for (int i = 1; i < 4096; ++i)
        best = std::max(best, gamma_(x_.quantile(i / 4096.0)));
    return best;
}

double MarketModel::gamma_ess_inf() const
{
    auto [lo, hi] = x_.support();
    switch (gamma_.monotonicity()) {
    case Monotonicity::Constant: return gamma_(lo);
    case Monotonicity::Increasing: return gamma_(lo);
    case Monotonicity::Decreasing: return std::isfinite(hi) ? gamma_(hi) : 0.0;
    case Monotonicity::General: break;
    }
    double best = kInf;
    for (int i = 1; i < 4096; ++i)
        best = std::min(best, gamma_(x_.quantile(i / 4096.0)));
    return best;
}

double MarketModel::var_gamma(double p) const
{
    if (!(p > 0 && p < 1))
        throw DomainError("risk level must lie in (0,1)");
    if (gamma_.is_constant())
        return gamma_(0.0);
    if (gamma_.monotonicity() == Monotonicity::Increasing)
        return gamma_(x_.quantile(p));
    auto pred = [&](double c) { return 1.0 - prob(gamma_above(c)) >= p - kProbTol; };
    double lo = std::max(0.0, gamma_ess_inf()) * 0.5;
    double hi = std::max(1.0, lo);
    while (!pred(hi))
        hi *= 2;
    if (pred(lo))
        return lo;
    return numerics::first_true(pred, lo, hi);
}

double MarketModel::es_gamma(double p) const
{
    double c = var_gamma(p);
    auto a = gamma_above(c);
    return c + (gamma_mass(a) - c * prob(a)) / (1 - p);
}

double quantile(const ScalarDistribution& dist, double t)
{
    return dist.quantile(t);
}

double expect_gamma_indicator(const MarketModel& model, const IntervalSet& a)
{
    return model.gamma_mass(a);
}

AssumptionReport check_assumptions(const MarketModel& model, double p)
{
    AssumptionReport r;
    const auto& x = model.x();
    const auto& g = model.gamma();
    auto [lo, hi] = x.support();

    {
        double total = model.gamma_mass(IntervalSet::all());
        double gx = model.expect_gamma_x();
        bool ok = lo >= 0 && std::fabs(total - 1) <= 1e-8 && std::isfinite(gx);
        char buf[256];
        std::snprintf(buf, sizeof buf, "inf supp X = %.6g, E[gamma] = %.12g, E[gamma X] = %.12g", lo,
                      total, gx);
        r.set({"A", ok ? CheckStatus::Holds : CheckStatus::Fails, buf});
    }
    r.set({"V1", CheckStatus::Deferred, "needs the solved q; checked by the no-short-selling VaR solver"});
    r.set({"V2", CheckStatus::Deferred, "needs the solved q'; checked by the bounded VaR solver"});

    if (p > 0 && p < 1) {
        double sup = model.gamma_ess_sup();
        double bound = 1 / (1 - p);
        char buf[160];
        std::snprintf(buf, sizeof buf, "ess-sup gamma = %.12g, 1/(1-p) = %.12g", sup, bound);
        r.set({"E1", sup <= bound ? CheckStatus::Holds : CheckStatus::Fails, buf});
    } else {
        r.set({"E1", CheckStatus::Fails, "p outside (0,1)"});
    }

    if (g.is_constant()) {
        r.set({"E2", CheckStatus::Holds, "gamma is constant"});
    } else if (g.kind() == PricingDensity::Kind::Custom && g.monotonicity() == Monotonicity::General) {
        r.set({"E2", CheckStatus::Deferred, "continuity of a general callback is not verified"});
    } else {
        bool ok = x.is_continuous();
        r.set({"E2", ok ? CheckStatus::Holds : CheckStatus::Fails,
               ok ? "gamma is strictly monotone and continuous, X atomless"
                  : "X has atoms, so gamma(X) is not continuously distributed"});
    }

    {
        std::string why;
        if (!(p >= 0.5 && p < 1))
            why += "p < 1/2; ";
        if (!x.has_nonincreasing_density())
            why += "X lacks a nonincreasing density; ";
        auto mono = g.monotonicity();
        if (mono != Monotonicity::Increasing && mono != Monotonicity::Constant)
            why += "gamma is not increasing in X; ";
        if (why.empty())
            r.set({"V3", CheckStatus::Holds,
                   "p >= 1/2, nonincreasing density, gamma increasing (q > 0 checked after solving)"});
        else
            r.set({"V3", CheckStatus::Fails, why});
    }
    (void)hi;
    return r;
}

} // namespace robopt
