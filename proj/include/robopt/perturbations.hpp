#pragma once

#include "robopt/market_model.hpp"
#include "robopt/metrics.hpp"
#include "robopt/solution_function.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

namespace robopt {

enum class PerturbKind { Shift, Scale, LemmaA2, TailSpike };

std::string to_string(PerturbKind k);

// Law of X_eps = X on {X in B} or {X + U not in R}, else X + U, with
// U ~ Uniform[-eps, eps] independent of X and R the support interval of X.
// Computed exactly from the partial moments of X.
class LemmaA2Law : public Law {
public:
    LemmaA2Law(ScalarDistribution x, IntervalSet b, double eps);

    double prob(double lo, double hi) const override;
    double first_moment(double lo, double hi) const override;
    std::pair<double, double> support() const override;
    std::vector<double> atoms() const override { return x_.atoms(); }

private:
    struct Window {
        double mass = 0;   // int f(x) w(x)
        double xmass = 0;  // int f(x) x w(x)
        double zmom = 0;   // int f(x) (1/2eps) int_{[x-eps,x+eps] cap I} z dz
    };
    Window window(double il, double ih, double a, double b) const;
    std::pair<double, double> moments(double lo, double hi) const;

    ScalarDistribution x_;
    IntervalSet b_;
    IntervalSet k_;
    double rlo_;
    double rhi_;
    double eps_;
};

// Z = X + h 1{X > v} with v = VaR_{1 - mass}(X).
class TailSpikeLaw : public Law {
public:
    TailSpikeLaw(ScalarDistribution x, double mass, double height);

    double prob(double lo, double hi) const override;
    double first_moment(double lo, double hi) const override;
    std::pair<double, double> support() const override;
    std::vector<double> atoms() const override;
    double threshold() const { return v_; }

private:
    ScalarDistribution x_;
    double v_;
    double h_;
};

struct DistanceValue {
    double value;
    bool exact;  // false: an upper bound
};

// A one-parameter family eps -> Z_eps coupled with X.
//   shift:      Z = X + eps
//   scale:      Z = (1 + eps) X
//   lemma_a2:   Z = X_eps above, B = {phi > a}
//   tail_spike: Z = X + H 1{X > VaR_{1-mass}(X)}, mass = mass_coeff eps,
//               H = height_coeff eps^(-height_power)
class PerturbationFamily {
public:
    static PerturbationFamily shift();
    static PerturbationFamily scale();
    // requires P(X not in B) = p within 1e-6
    static PerturbationFamily lemma_a2(const MarketModel& model, IntervalSet b, double p, bool quantile_coupled = false);
    static PerturbationFamily lemma_a2(const MarketModel& model, const std::function<double(double)>& phi, double a,
                                       double p, bool quantile_coupled = false);
    // B = {g > VaR_p(g(X))}
    static PerturbationFamily lemma_a2_for(const MarketModel& model, const SolutionFunction& g, double p,
                                           bool quantile_coupled = false);
    static PerturbationFamily tail_spike(double mass_coeff, double height_coeff = 1.0, double height_power = 2.0);

    PerturbKind kind() const { return kind_; }
    std::string name() const { return to_string(kind_); }
    const IntervalSet& b_set() const { return b_; }
    bool quantile_coupled() const { return quantile_coupled_; }
    double spike_mass(double eps) const { return mass_coeff_ * eps; }
    double spike_height(double eps) const { return height_coeff_ * std::pow(eps, -height_power_); }

    std::shared_ptr<const Law> law(const MarketModel& model, double eps) const;
    // parametric Z (shift/scale) for re-solving at the perturbed model
    std::optional<ScalarDistribution> parametric(const MarketModel& model, double eps) const;

    // Index-coupled samples: xs from stream 0, auxiliary noise from stream 1.
    void sample(const MarketModel& model, double eps, std::uint64_t seed, std::span<double> xs,
                std::span<double> zs) const;

    std::optional<DistanceValue> distance(const MarketModel& model, const MetricKind& metric, double eps) const;

private:
    PerturbKind kind_ = PerturbKind::Shift;
    IntervalSet b_;
    bool quantile_coupled_ = false;
    double mass_coeff_ = 0.05;
    double height_coeff_ = 1.0;
    double height_power_ = 2.0;
};

// Coupled sampler of (X, Z_eps) for a fixed eps.
struct CoupledSampler {
    PerturbationFamily family;
    const MarketModel* model;
    double eps;

    void operator()(std::uint64_t seed, std::span<double> xs, std::span<double> zs) const
    {
        family.sample(*model, eps, seed, xs, zs);
    }
};

// n -> sampler of (X, Z_{1/n}) for the construction with B = {phi > a}.
std::function<CoupledSampler(int)> lemma_a2_sequence(const MarketModel& model, const std::function<double(double)>& phi,
                                                     double a, double p);
CoupledSampler shift(const MarketModel& model, double delta);

} // namespace robopt
