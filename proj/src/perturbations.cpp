#include "robopt/perturbations.hpp"

#include "robopt/errors.hpp"
#include "robopt/kernels.hpp"
#include "robopt/numerics.hpp"
#include "robopt/risk_measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace robopt {

std::string to_string(PerturbKind k)
{
    switch (k) {
    case PerturbKind::Shift: return "shift";
    case PerturbKind::Scale: return "scale";
    case PerturbKind::LemmaA2: return "lemma_a2";
    case PerturbKind::TailSpike: return "tail_spike";
    }
    return "?";
}

LemmaA2Law::LemmaA2Law(ScalarDistribution x, IntervalSet b, double eps)
    : x_(std::move(x)), b_(std::move(b)), eps_(eps)
{
    if (!(eps > 0))
        throw DomainError("LemmaA2Law needs eps > 0");
    auto [lo, hi] = x_.support();
    rlo_ = std::nextafter(lo, -kInf);
    rhi_ = hi;
    k_ = b_.complement().intersect(Interval{rlo_, rhi_});
}

std::pair<double, double> LemmaA2Law::support() const
{
    return x_.support();
}

LemmaA2Law::Window LemmaA2Law::window(double il, double ih, double a, double b) const
{
    Window w;
    if (!(a < b) || !(il < ih))
        return w;
    const double e = eps_;
    std::vector<double> cuts{a, b};
    for (double v : {il - e, il + e, ih - e, ih + e})
        if (v > a && v < b)
            cuts.push_back(v);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double s = cuts[i], t = cuts[i + 1];
        if (!(s < t))
            continue;
        double mid = std::isfinite(t) ? 0.5 * (s + t) : s + 1;
        double l0, l1, u0, u1;
        if (mid - e > il) {
            l0 = -e;
            l1 = 1;
        } else {
            l0 = il;
            l1 = 0;
        }
        if (mid + e < ih) {
            u0 = e;
            u1 = 1;
        } else {
            u0 = ih;
            u1 = 0;
        }
        if (u0 + u1 * mid <= l0 + l1 * mid)
            continue;
        double m0 = x_.partial_moment(0, s, t);
        if (m0 == 0.0)
            continue;
        double m1 = x_.partial_moment(1, s, t);
        double m2 = x_.partial_moment(2, s, t);
        double c0 = u0 - l0, c1 = u1 - l1;
        w.mass += (c0 * m0 + c1 * m1) / (2 * e);
        w.xmass += (c0 * m1 + c1 * m2) / (2 * e);
        double q0 = u0 * u0 - l0 * l0, q1 = 2 * (u0 * u1 - l0 * l1), q2 = u1 * u1 - l1 * l1;
        w.zmom += 0.5 * (q0 * m0 + q1 * m1 + q2 * m2) / (2 * e);
    }
    return w;
}

std::pair<double, double> LemmaA2Law::moments(double lo, double hi) const
{
    double jl = std::max(lo, rlo_), jh = std::min(hi, rhi_);
    if (!(jl < jh))
        return {0.0, 0.0};
    double p = 0, m = 0;
    const auto in_b = b_.intersect(Interval{jl, jh});
    for (const auto& iv : in_b.parts()) {
        p += x_.prob(iv.lo, iv.hi);
        m += x_.partial_moment(1, iv.lo, iv.hi);
    }
    for (const auto& kv : k_.parts()) {
        // mass moved into (jl, jh]
        auto moved = window(jl, jh, kv.lo, kv.hi);
        p += moved.mass;
        m += moved.zmom;
        // mass that stays put because X + U left the support
        double sl = std::max(kv.lo, jl), sh = std::min(kv.hi, jh);
        if (sl < sh) {
            auto inside = window(rlo_, rhi_, sl, sh);
            p += x_.partial_moment(0, sl, sh) - inside.mass;
            m += x_.partial_moment(1, sl, sh) - inside.xmass;
        }
    }
    return {std::clamp(p, 0.0, 1.0), m};
}

double LemmaA2Law::prob(double lo, double hi) const
{
    if (!(lo < hi))
        return 0.0;
    return moments(lo, hi).first;
}

double LemmaA2Law::first_moment(double lo, double hi) const
{
    if (!(lo < hi))
        return 0.0;
    return moments(lo, hi).second;
}

TailSpikeLaw::TailSpikeLaw(ScalarDistribution x, double mass, double height) : x_(std::move(x)), h_(height)
{
    if (!(mass > 0 && mass < 1))
        throw DomainError("spike mass must lie in (0,1)");
    if (!(height >= 0) || !std::isfinite(height))
        throw DomainError("spike height must be finite and nonnegative");
    v_ = x_.quantile(1 - mass);
}

double TailSpikeLaw::prob(double lo, double hi) const
{
    if (!(lo < hi))
        return 0.0;
    return x_.prob(lo, std::min(hi, v_)) + x_.prob(std::max(lo - h_, v_), hi - h_);
}

double TailSpikeLaw::first_moment(double lo, double hi) const
{
    if (!(lo < hi))
        return 0.0;
    double l = std::max(lo - h_, v_), u = hi - h_;
    return x_.first_moment(lo, std::min(hi, v_)) + x_.first_moment(l, u) + h_ * x_.prob(l, u);
}

std::pair<double, double> TailSpikeLaw::support() const
{
    auto [lo, hi] = x_.support();
    return {lo, hi + h_};
}

std::vector<double> TailSpikeLaw::atoms() const
{
    auto a = x_.atoms();
    for (auto& v : a)
        if (v > v_)
            v += h_;
    return a;
}

PerturbationFamily PerturbationFamily::shift()
{
    PerturbationFamily f;
    f.kind_ = PerturbKind::Shift;
    return f;
}

PerturbationFamily PerturbationFamily::scale()
{
    PerturbationFamily f;
    f.kind_ = PerturbKind::Scale;
    return f;
}

PerturbationFamily PerturbationFamily::lemma_a2(const MarketModel& model, IntervalSet b, double p, bool quantile_coupled)
{
    double below = 1.0 - model.prob(b);
    if (std::fabs(below - p) > 1e-6) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "perturbation precondition fails: P(phi(X) <= a) = %.12g, p = %.12g", below, p);
        throw DomainError(buf);
    }
    PerturbationFamily f;
    f.kind_ = PerturbKind::LemmaA2;
    f.b_ = std::move(b);
    f.quantile_coupled_ = quantile_coupled;
    return f;
}

PerturbationFamily PerturbationFamily::lemma_a2(const MarketModel& model, const std::function<double(double)>& phi,
                                                double a, double p, bool quantile_coupled)
{
    return lemma_a2(model, model.level_set_above(phi, a), p, quantile_coupled);
}

PerturbationFamily PerturbationFamily::lemma_a2_for(const MarketModel& model, const SolutionFunction& g, double p,
                                                    bool quantile_coupled)
{
    double a = var_of(g, model.x(), RiskLevel(p));
    return lemma_a2(model, g.above(a), p, quantile_coupled);
}

PerturbationFamily PerturbationFamily::tail_spike(double mass_coeff, double height_coeff, double height_power)
{
    if (!(mass_coeff > 0 && mass_coeff < 1))
        throw DomainError("tail spike mass coefficient must lie in (0,1)");
    if (!(height_coeff > 0) || !(height_power >= 0))
        throw DomainError("tail spike height needs a positive coefficient and nonnegative power");
    PerturbationFamily f;
    f.kind_ = PerturbKind::TailSpike;
    f.mass_coeff_ = mass_coeff;
    f.height_coeff_ = height_coeff;
    f.height_power_ = height_power;
    return f;
}

std::optional<ScalarDistribution> PerturbationFamily::parametric(const MarketModel& model, double eps) const
{
    switch (kind_) {
    case PerturbKind::Shift: return model.x().shifted(eps);
    case PerturbKind::Scale: return model.x().scaled(1 + eps);
    default: return std::nullopt;
    }
}

std::shared_ptr<const Law> PerturbationFamily::law(const MarketModel& model, double eps) const
{
    if (!(eps >= 0))
        throw DomainError("perturbation size must be nonnegative");
    if (auto z = parametric(model, eps))
        return std::make_shared<ScalarDistribution>(*z);
    if (eps == 0)
        return std::make_shared<ScalarDistribution>(model.x());
    if (kind_ == PerturbKind::LemmaA2)
        return std::make_shared<LemmaA2Law>(model.x(), b_, eps);
    return std::make_shared<TailSpikeLaw>(model.x(), spike_mass(eps), spike_height(eps));
}

void PerturbationFamily::sample(const MarketModel& model, double eps, std::uint64_t seed, std::span<double> xs,
                                std::span<double> zs) const
{
    if (xs.size() != zs.size())
        throw DomainError("coupled sample buffers differ in length");
    const auto& x = model.x();
    kernels::fill_uniform(seed, kernels::kStreamX, xs);
    kernels::transform(xs, xs, [&](double u) { return x.from_uniform(u); });

    switch (kind_) {
    case PerturbKind::Shift:
        kernels::transform(xs, zs, [eps](double v) { return v + eps; });
        return;
    case PerturbKind::Scale:
        kernels::transform(xs, zs, [eps](double v) { return (1 + eps) * v; });
        return;
    case PerturbKind::TailSpike: {
        if (eps == 0) {
            std::copy(xs.begin(), xs.end(), zs.begin());
            return;
        }
        TailSpikeLaw law(x, spike_mass(eps), spike_height(eps));
        double v = law.threshold(), h = spike_height(eps);
        kernels::transform(xs, zs, [v, h](double s) { return s > v ? s + h : s; });
        return;
    }
    case PerturbKind::LemmaA2: {
        if (eps == 0) {
            std::copy(xs.begin(), xs.end(), zs.begin());
            return;
        }
        if (quantile_coupled_) {
            LemmaA2Law law(x, b_, eps);
            kernels::transform(xs, zs, [&](double s) {
                double t = std::clamp(x.cdf(s), 1e-15, 1 - 1e-15);
                return law.quantile(t);
            });
            return;
        }
        auto [lo, hi] = x.support();
        kernels::fill_uniform(seed, kernels::kStreamAux, zs);
        const auto& b = b_;
        kernels::transform2(xs, zs, zs, [&, lo, hi](double s, double u) {
            double moved = s + eps * (2 * u - 1);
            if (b.contains(s) || moved < lo || moved > hi)
                return s;
            return moved;
        });
        return;
    }
    }
}

std::optional<DistanceValue> PerturbationFamily::distance(const MarketModel& model, const MetricKind& metric,
                                                          double eps) const
{
    using K = MetricKind::Kind;
    const auto& x = model.x();
    switch (kind_) {
    case PerturbKind::Shift:
        if (metric.kind == K::Prokhorov)
            return DistanceValue{std::min(std::fabs(eps), 1.0), false};
        return DistanceValue{std::fabs(eps), true};
    case PerturbKind::Scale:
        switch (metric.kind) {
        case K::LInf: return DistanceValue{eps * std::max(std::fabs(x.support().first), std::fabs(x.ess_sup())), true};
        case K::Lq: {
            double mom = x.partial_power_moment(metric.q, -kInf, kInf);
            return DistanceValue{eps * std::pow(mom, 1 / metric.q), true};
        }
        case K::Prokhorov: {
            if (eps == 0)
                return DistanceValue{0.0, true};
            // Strassen bound with the identity coupling: inf{t : P(eps X > t) <= t}
            auto ok = [&](double t) { return 1.0 - x.cdf(t / eps) <= t; };
            return DistanceValue{numerics::first_true(ok, 0.0, 1.0), false};
        }
        }
        break;
    case PerturbKind::LemmaA2:
        return DistanceValue{eps, false};
    case PerturbKind::TailSpike: {
        if (eps == 0)
            return DistanceValue{0.0, true};
        double mass = spike_mass(eps), h = spike_height(eps);
        switch (metric.kind) {
        case K::LInf: return DistanceValue{h, true};
        case K::Lq: return DistanceValue{h * std::pow(mass, 1 / metric.q), x.is_continuous()};
        case K::Prokhorov: return DistanceValue{std::min({mass, h, 1.0}), false};
        }
        break;
    }
    }
    return std::nullopt;
}

std::function<CoupledSampler(int)> lemma_a2_sequence(const MarketModel& model, const std::function<double(double)>& phi,
                                                     double a, double p)
{
    auto fam = PerturbationFamily::lemma_a2(model, phi, a, p);
    const MarketModel* mp = &model;
    return [fam, mp](int n) {
        if (n <= 0)
            throw DomainError("sequence index must be positive");
        return CoupledSampler{fam, mp, 1.0 / n};
    };
}

CoupledSampler shift(const MarketModel& model, double delta)
{
    return CoupledSampler{PerturbationFamily::shift(), &model, delta};
}

} // namespace robopt
