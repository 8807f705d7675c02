#pragma once

#include "robopt/distribution.hpp"
#include "robopt/interval_set.hpp"

#include <functional>
#include <string>
#include <vector>

namespace robopt {

enum class Monotonicity { Constant, Increasing, Decreasing, General };

std::string to_string(Monotonicity m);

// gamma as a function of the economic variable x:
//   constant  gamma(x) = a
//   linear    gamma(x) = a + b x
//   power     gamma(x) = a x^b   (x > 0)
//   custom    user callback with a declared monotonicity
class PricingDensity {
public:
    enum class Kind { Constant, Linear, Power, Custom };

    static PricingDensity constant(double a = 1.0);
    static PricingDensity linear(double intercept, double slope);
    static PricingDensity power(double exponent, double coeff = 1.0);
    static PricingDensity custom(std::function<double(double)> fn, Monotonicity mono);

    double operator()(double x) const;

    Kind kind() const { return kind_; }
    double a() const { return a_; }
    double b() const { return b_; }
    Monotonicity monotonicity() const;
    bool is_constant() const { return monotonicity() == Monotonicity::Constant; }

    PricingDensity rescaled(double factor) const;
    std::string describe() const;

private:
    Kind kind_ = Kind::Constant;
    double a_ = 1.0;
    double b_ = 0.0;
    std::function<double(double)> fn_;
    Monotonicity declared_ = Monotonicity::Constant;
};

enum class CheckStatus { Holds, Fails, Deferred };

std::string to_string(CheckStatus s);

struct AssumptionCheck {
    std::string name;
    CheckStatus status = CheckStatus::Deferred;
    std::string diagnostic;
};

struct AssumptionReport {
    std::vector<AssumptionCheck> checks;

    const AssumptionCheck& get(const std::string& name) const;
    bool holds(const std::string& name) const { return get(name).status == CheckStatus::Holds; }
    void set(AssumptionCheck c);
};

class MarketModel {
public:
    // Rescales gamma so that E[gamma(X)] = 1 when it is off by more than 1e-8;
    // the applied factor is kept in warning().
    MarketModel(ScalarDistribution x, PricingDensity gamma);

    const ScalarDistribution& x() const { return x_; }
    const PricingDensity& gamma() const { return gamma_; }
    const std::string& warning() const { return warning_; }

    double prob(const IntervalSet& a) const;
    // E[gamma(X) 1{X in A}]
    double gamma_mass(const IntervalSet& a) const;
    // E[gamma(X) X 1{X in A}]
    double gamma_first(const IntervalSet& a) const;
    double expect_gamma_x() const { return gamma_first(IntervalSet::all()); }

    // {x : gamma(x) > c}
    IntervalSet gamma_above(double c) const;
    double gamma_ess_sup() const;
    double gamma_ess_inf() const;
    double var_gamma(double p) const;
    double es_gamma(double p) const;

    // Upper level set {x : h(x) > c} of a continuous function on the support
    // of X, located on a quantile grid and refined by bisection.
    IntervalSet level_set_above(const std::function<double(double)>& h, double c) const;

private:
    double gamma_mass_interval(double lo, double hi) const;
    double gamma_first_interval(double lo, double hi) const;

    ScalarDistribution x_;
    PricingDensity gamma_;
    std::string warning_;
};

double quantile(const ScalarDistribution& dist, double t);
double expect_gamma_indicator(const MarketModel& model, const IntervalSet& a);
AssumptionReport check_assumptions(const MarketModel& model, double p);

} // namespace robopt
