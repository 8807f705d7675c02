#include "robopt/distribution.hpp"

#include "robopt/errors.hpp"
#include "robopt/numerics.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace robopt {

namespace {

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double norm_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

void require(bool ok, const char* what)
{
    if (!ok)
        throw DomainError(what);
}

} // namespace

std::string to_string(Family f)
{
    switch (f) {
    case Family::Uniform: return "uniform";
    case Family::Exponential: return "exponential";
    case Family::Lognormal: return "lognormal";
    case Family::Pareto: return "pareto";
    case Family::Empirical: return "empirical";
    }
    return "?";
}

ScalarDistribution ScalarDistribution::uniform(double a, double b)
{
    require(std::isfinite(a) && std::isfinite(b) && a < b, "uniform requires finite a < b");
    ScalarDistribution d;
    d.family_ = Family::Uniform;
    d.params_ = {a, b};
    return d;
}

ScalarDistribution ScalarDistribution::exponential(double rate)
{
    require(rate > 0 && std::isfinite(rate), "exponential rate must be positive");
    ScalarDistribution d;
    d.family_ = Family::Exponential;
    d.params_ = {rate};
    return d;
}

ScalarDistribution ScalarDistribution::lognormal(double mu, double sigma)
{
    require(std::isfinite(mu) && sigma > 0 && std::isfinite(sigma), "lognormal requires sigma > 0");
    ScalarDistribution d;
    d.family_ = Family::Lognormal;
    d.params_ = {mu, sigma};
    return d;
}

ScalarDistribution ScalarDistribution::pareto(double alpha, double scale)
{
    require(alpha > 1 && std::isfinite(alpha), "pareto requires alpha > 1 (finite mean)");
    require(scale > 0 && std::isfinite(scale), "pareto scale must be positive");
    ScalarDistribution d;
    d.family_ = Family::Pareto;
    d.params_ = {alpha, scale};
    return d;
}

ScalarDistribution ScalarDistribution::empirical(std::vector<double> values, std::vector<double> weights)
{
    require(!values.empty(), "empirical distribution needs at least one atom");
    if (weights.empty())
        weights.assign(values.size(), 1.0 / static_cast<double>(values.size()));
    require(weights.size() == values.size(), "weights and values differ in length");
    for (std::size_t i = 0; i < values.size(); ++i) {
        require(std::isfinite(values[i]), "atom values must be finite");
        require(weights[i] >= 0, "atom weights must be nonnegative");
    }
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    require(std::fabs(total - 1.0) <= 1e-12 * static_cast<double>(values.size()) + 1e-12,
            "atom weights must sum to 1");

    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return values[a] < values[b]; });

    ScalarDistribution d;
    d.family_ = Family::Empirical;
    for (auto i : idx) {
        if (!d.values_.empty() && d.values_.back() == values[i]) {
            d.weights_.back() += weights[i];
        } else {
            d.values_.push_back(values[i]);
            d.weights_.push_back(weights[i]);
        }
    }
    double c0 = 0, c1 = 0, c2 = 0;
    for (std::size_t i = 0; i < d.values_.size(); ++i) {
        double w = d.weights_[i], v = d.values_[i];
        c0 += w;
        c1 += w * v;
        c2 += w * v * v;
        d.cum_.push_back(c0);
        d.cum_m1_.push_back(c1);
        d.cum_m2_.push_back(c2);
    }
    d.cum_.back() = 1.0;
    return d;
}

ScalarDistribution ScalarDistribution::shifted(double delta) const
{
    require(std::isfinite(delta), "shift must be finite");
    if (family_ == Family::Empirical) {
        auto v = values_;
        for (auto& x : v)
            x += delta;
        return empirical(std::move(v), weights_);
    }
    ScalarDistribution d = *this;
    d.loc_ += delta;
    return d;
}

ScalarDistribution ScalarDistribution::scaled(double factor) const
{
    require(factor > 0 && std::isfinite(factor), "scale factor must be positive");
    if (family_ == Family::Empirical) {
        auto v = values_;
        for (auto& x : v)
            x *= factor;
        return empirical(std::move(v), weights_);
    }
    ScalarDistribution d = *this;
    d.loc_ *= factor;
    d.scale_ *= factor;
    return d;
}

double ScalarDistribution::base_cdf(double z) const
{
    switch (family_) {
    case Family::Uniform: {
        double a = params_[0], b = params_[1];
        return z <= a ? 0.0 : z >= b ? 1.0 : (z - a) / (b - a);
    }
    case Family::Exponential:
        return z <= 0 ? 0.0 : -std::expm1(-params_[0] * z);
    case Family::Lognormal:
        return z <= 0 ? 0.0 : norm_cdf((std::log(z) - params_[0]) / params_[1]);
    case Family::Pareto:
        return z <= params_[1] ? 0.0 : 1.0 - std::pow(params_[1] / z, params_[0]);
    case Family::Empirical: {
        auto it = std::upper_bound(values_.begin(), values_.end(), z);
        return it == values_.begin() ? 0.0 : cum_[static_cast<std::size_t>(it - values_.begin()) - 1];
    }
    }
    return 0.0;
}

double ScalarDistribution::prob(double lo, double hi) const
{
    if (!(lo < hi))
        return 0.0;
    return std::max(0.0, partial_moment(0, lo, hi));
}

double ScalarDistribution::base_partial_moment(int k, double lo, double hi) const
{
    if (!(lo < hi))
        return 0.0;
    switch (family_) {
    case Family::Uniform: {
        double a = params_[0], b = params_[1];
        double l = std::max(lo, a), h = std::min(hi, b);
        if (!(l < h))
            return 0.0;
        double kk = k + 1;
        return (std::pow(h, kk) - std::pow(l, kk)) / (kk * (b - a));
    }
    case Family::Exponential: {
        double r = params_[0];
        // upper-tail forms keep far-tail integrals accurate
        auto tail = [&](double t) {
            if (t <= 0)
                t = 0;
            if (!std::isfinite(t))
                return 0.0;
            double e = std::exp(-r * t);
            switch (k) {
            case 0: return e;
            case 1: return (t + 1 / r) * e;
            default: return (t * t + 2 * t / r + 2 / (r * r)) * e;
            }
        };
        if (hi <= 0)
            return 0.0;
        double l = std::max(lo, 0.0);
        if (k == 0 && r * hi < 1.0)
            return std::exp(-r * l) * -std::expm1(-r * (hi - l));
        return tail(l) - tail(hi);
    }
    case Family::Lognormal: {
        double mu = params_[0], s = params_[1];
        double scale = std::exp(k * mu + 0.5 * k * k * s * s);
        auto z = [&](double t) { return (std::log(t) - mu - k * s * s) / s; };
        double l = std::max(lo, 0.0);
        if (!(l < hi))
            return 0.0;
        double zl = l <= 0 ? -kInf : z(l);
        double zh = std::isfinite(hi) ? z(hi) : kInf;
        if (zl >= 0)
            return scale * (norm_sf(zl) - norm_sf(zh));
        return scale * (norm_cdf(zh) - norm_cdf(zl));
    }
    case Family::Pareto: {
        double a = params_[0], xm = params_[1];
        double l = std::max(lo, xm);
        if (!(l < hi))
            return 0.0;
        if (k >= a)
            return kInf;
        auto tail = [&](double t) {
            return std::isfinite(t) ? a * std::pow(xm, a) * std::pow(t, k - a) / (a - k) : 0.0;
        };
        return tail(l) - tail(hi);
    }
    case Family::Empirical: {
        auto pick = [&](double t) -> std::ptrdiff_t {
            return std::upper_bound(values_.begin(), values_.end(), t) - values_.begin();
        };
        auto il = pick(lo), ih = pick(hi);
        if (il >= ih)
            return 0.0;
        const auto& c = k == 0 ? cum_ : k == 1 ? cum_m1_ : cum_m2_;
        double upper = c[static_cast<std::size_t>(ih - 1)];
        double lower = il == 0 ? 0.0 : c[static_cast<std::size_t>(il - 1)];
        if (k == 0 && ih == static_cast<std::ptrdiff_t>(values_.size()))
            upper = 1.0;
        // recompute short ranges directly to avoid prefix-sum cancellation
        if (ih - il <= 64) {
            double s = 0;
            for (auto i = il; i < ih; ++i) {
                double v = values_[static_cast<std::size_t>(i)];
                s += weights_[static_cast<std::size_t>(i)] * (k == 0 ? 1.0 : k == 1 ? v : v * v);
            }
            return s;
        }
        return upper - lower;
    }
    }
    return 0.0;
}

double ScalarDistribution::partial_moment(int k, double lo, double hi) const
{
    if (k < 0 || k > 2)
        throw DomainError("partial_moment supports k = 0, 1, 2");
    if (!(lo < hi))
        return 0.0;
    if (loc_ == 0.0 && scale_ == 1.0)
        return base_partial_moment(k, lo, hi);
    double bl = (lo - loc_) / scale_, bh = (hi - loc_) / scale_;
    double m0 = base_partial_moment(0, bl, bh);
    if (k == 0)
        return m0;
    double m1 = base_partial_moment(1, bl, bh);
    if (k == 1)
        return loc_ * m0 + scale_ * m1;
    double m2 = base_partial_moment(2, bl, bh);
    return loc_ * loc_ * m0 + 2 * loc_ * scale_ * m1 + scale_ * scale_ * m2;
}

double ScalarDistribution::base_partial_power(double s, double lo, double hi) const
{
    switch (family_) {
    case Family::Uniform: {
        double a = params_[0], b = params_[1];
        double l = std::max({lo, a, 0.0}), h = std::min(hi, b);
        if (!(l < h))
            return 0.0;
        if (s == -1.0)
            return (std::log(h) - std::log(l)) / (b - a);
        return (std::pow(h, s + 1) - std::pow(l, s + 1)) / ((s + 1) * (b - a));
    }
    case Family::Exponential: {
        double r = params_[0];
        require(s > -1, "power moment of the exponential needs exponent > -1");
        double l = std::max(lo, 0.0);
        if (!(l < hi))
            return 0.0;
        double ql = boost::math::gamma_q(s + 1, r * l);
        double qh = std::isfinite(hi) ? boost::math::gamma_q(s + 1, r * hi) : 0.0;
        return std::tgamma(s + 1) / std::pow(r, s) * (ql - qh);
    }
    case Family::Lognormal: {
        double mu = params_[0], sg = params_[1];
        double l = std::max(lo, 0.0);
        if (!(l < hi))
            return 0.0;
        double scale = std::exp(s * mu + 0.5 * s * s * sg * sg);
        auto z = [&](double t) { return (std::log(t) - mu - s * sg * sg) / sg; };
        double zl = l <= 0 ? -kInf : z(l);
        double zh = std::isfinite(hi) ? z(hi) : kInf;
        if (zl >= 0)
            return scale * (norm_sf(zl) - norm_sf(zh));
        return scale * (norm_cdf(zh) - norm_cdf(zl));
    }
    case Family::Pareto: {
        double a = params_[0], xm = params_[1];
        double l = std::max(lo, xm);
        if (!(l < hi))
            return 0.0;
        if (s >= a)
            return kInf;
        auto tail = [&](double t) {
            return std::isfinite(t) ? a * std::pow(xm, a) * std::pow(t, s - a) / (a - s) : 0.0;
        };
        return tail(l) - tail(hi);
    }
    case Family::Empirical: {
        double acc = 0;
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (values_[i] > lo && values_[i] <= hi)
                acc += weights_[i] * std::pow(values_[i], s);
        return acc;
    }
    }
    return 0.0;
}

double ScalarDistribution::partial_power_moment(double s, double lo, double hi) const
{
    if (!(lo < hi))
        return 0.0;
    if (s == 0.0 || s == 1.0 || s == 2.0)
        return partial_moment(static_cast<int>(s), lo, hi);
    if (loc_ == 0.0) {
        double f = std::pow(scale_, s);
        return f * base_partial_power(s, lo / scale_, hi / scale_);
    }
    auto [slo, shi] = support();
    double l = std::max({lo, slo, 0.0}), h = std::min(hi, shi);
    if (!(l < h))
        return 0.0;
    return numerics::integrate([&](double x) { return x > 0 ? std::pow(x, s) * pdf(x) : 0.0; }, l, h);
}

double ScalarDistribution::base_pdf(double z) const
{
    switch (family_) {
    case Family::Uniform:
        return (z >= params_[0] && z <= params_[1]) ? 1.0 / (params_[1] - params_[0]) : 0.0;
    case Family::Exponential:
        return z < 0 ? 0.0 : params_[0] * std::exp(-params_[0] * z);
    case Family::Lognormal: {
        if (z <= 0)
            return 0.0;
        double u = (std::log(z) - params_[0]) / params_[1];
        return std::exp(-0.5 * u * u) / (z * params_[1] * std::sqrt(2 * M_PI));
    }
    case Family::Pareto:
        return z < params_[1] ? 0.0 : params_[0] * std::pow(params_[1], params_[0]) / std::pow(z, params_[0] + 1);
    case Family::Empirical:
        return 0.0;
    }
    return 0.0;
}

double ScalarDistribution::pdf(double x) const
{
    return base_pdf((x - loc_) / scale_) / scale_;
}

double ScalarDistribution::base_quantile(double t) const
{
    switch (family_) {
    case Family::Uniform:
        return params_[0] + t * (params_[1] - params_[0]);
    case Family::Exponential:
        return -std::log1p(-t) / params_[0];
    case Family::Lognormal:
        return std::exp(params_[0] + params_[1] * boost::math::quantile(boost::math::normal(), t));
    case Family::Pareto:
        return params_[1] * std::pow(1.0 - t, -1.0 / params_[0]);
    case Family::Empirical: {
        auto it = std::lower_bound(cum_.begin(), cum_.end(), t - kProbTol);
        if (it == cum_.end())
            return values_.back();
        return values_[static_cast<std::size_t>(it - cum_.begin())];
    }
    }
    return 0.0;
}

double ScalarDistribution::quantile(double t) const
{
    if (!(t > 0.0 && t < 1.0))
        throw DomainError("quantile level must lie in (0,1)");
    return loc_ + scale_ * base_quantile(t);
}

std::pair<double, double> ScalarDistribution::support() const
{
    double lo = 0, hi = kInf;
    switch (family_) {
    case Family::Uniform: lo = params_[0]; hi = params_[1]; break;
    case Family::Exponential:
    case Family::Lognormal: lo = 0; hi = kInf; break;
    case Family::Pareto: lo = params_[1]; hi = kInf; break;
    case Family::Empirical: lo = values_.front(); hi = values_.back(); break;
    }
    return {loc_ + scale_ * lo, loc_ + scale_ * hi};
}

std::vector<double> ScalarDistribution::atoms() const
{
    return family_ == Family::Empirical ? values_ : std::vector<double>{};
}

bool ScalarDistribution::has_nonincreasing_density() const
{
    return family_ == Family::Uniform || family_ == Family::Exponential || family_ == Family::Pareto;
}

std::string ScalarDistribution::describe() const
{
    char buf[160];
    switch (family_) {
    case Family::Uniform: std::snprintf(buf, sizeof buf, "Uniform(%g, %g)", params_[0], params_[1]); break;
    case Family::Exponential: std::snprintf(buf, sizeof buf, "Exponential(rate=%g)", params_[0]); break;
    case Family::Lognormal: std::snprintf(buf, sizeof buf, "Lognormal(mu=%g, sigma=%g)", params_[0], params_[1]); break;
    case Family::Pareto: std::snprintf(buf, sizeof buf, "Pareto(alpha=%g, scale=%g)", params_[0], params_[1]); break;
    case Family::Empirical: std::snprintf(buf, sizeof buf, "Empirical(%zu atoms)", values_.size()); break;
    }
    std::string s = buf;
    if (loc_ != 0.0 || scale_ != 1.0) {
        std::snprintf(buf, sizeof buf, " * %g + %g", scale_, loc_);
        s += buf;
    }
    return s;
}

} // namespace robopt
