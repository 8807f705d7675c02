#pragma once

#include "robopt/law.hpp"

#include <string>
#include <vector>

namespace robopt {

enum class Family { Uniform, Exponential, Lognormal, Pareto, Empirical };

std::string to_string(Family f);

// Law of X = loc + scale * B where B is one of the base families. Shift and
// scale perturbations stay inside this class so their pushforwards remain
// closed form.
class ScalarDistribution : public Law {
public:
    static ScalarDistribution uniform(double a, double b);
    static ScalarDistribution exponential(double rate);
    static ScalarDistribution lognormal(double mu, double sigma);
    // Pareto with tail index alpha > 1 on [scale, inf)
    static ScalarDistribution pareto(double alpha, double scale);
    // weights default to equal; values need not be sorted
    static ScalarDistribution empirical(std::vector<double> values, std::vector<double> weights = {});
    static ScalarDistribution point_mass(double v) { return empirical({v}); }

    ScalarDistribution shifted(double delta) const;
    ScalarDistribution scaled(double factor) const;

    Family family() const { return family_; }
    const std::vector<double>& params() const { return params_; }
    double loc() const { return loc_; }
    double scale() const { return scale_; }
    const std::vector<double>& atom_values() const { return values_; }
    const std::vector<double>& atom_weights() const { return weights_; }

    double prob(double lo, double hi) const override;
    double first_moment(double lo, double hi) const override { return partial_moment(1, lo, hi); }
    std::pair<double, double> support() const override;
    std::vector<double> atoms() const override;
    double quantile(double t) const override;

    // E[X^k 1{lo < X <= hi}] for k = 0, 1, 2
    double partial_moment(int k, double lo, double hi) const;
    // E[X^s 1{lo < X <= hi}] for real s on the positive half line
    double partial_power_moment(double s, double lo, double hi) const;

    double pdf(double x) const;
    bool is_continuous() const { return family_ != Family::Empirical; }
    bool has_nonincreasing_density() const;
    double ess_sup() const { return support().second; }

    // maps a uniform draw in (0,1) to a sample
    double from_uniform(double u) const { return quantile(u); }

    std::string describe() const;

private:
    ScalarDistribution() = default;

    double base_partial_moment(int k, double lo, double hi) const;
    double base_partial_power(double s, double lo, double hi) const;
    double base_cdf(double z) const;
    double base_quantile(double t) const;
    double base_pdf(double z) const;

    Family family_ = Family::Uniform;
    std::vector<double> params_;
    double loc_ = 0.0;
    double scale_ = 1.0;
    std::vector<double> values_;
    std::vector<double> weights_;
    std::vector<double> cum_;
    std::vector<double> cum_m1_;
    std::vector<double> cum_m2_;
};

} // namespace robopt
