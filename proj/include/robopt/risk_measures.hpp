#pragma once

#include "robopt/distribution.hpp"
#include "robopt/law.hpp"
#include "robopt/solution_function.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace robopt {

class RiskLevel {
public:
    explicit RiskLevel(double p);
    double value() const { return p_; }
    operator double() const { return p_; }

private:
    double p_;
};

enum class Rho { VaR, ES };

std::string to_string(Rho r);
Rho rho_from_string(const std::string& s);

// Left p-quantile and tail average of a law. ES may be +inf.
double var(const Law& law, RiskLevel p);
double es(const Law& law, RiskLevel p);

// Empirical estimators: order statistic ceil(np) and the matching tail average.
double var(std::span<const double> samples, RiskLevel p);
double es(std::span<const double> samples, RiskLevel p);
// index k = ceil(np) in 1..n, robust to the rounding of n*p
std::size_t order_index(std::size_t n, double p);

double ess_sup(const Law& law);

// P(g(Y) <= t) for Y with the given law.
double pushforward_cdf(const std::vector<Segment>& g, const Law& law, double t);
// E[(g(Y) - v)^+]
double expected_excess(const std::vector<Segment>& g, const Law& law, double v);

double var_of(const SolutionFunction& g, const Law& law, RiskLevel p);
double es_of(const SolutionFunction& g, const Law& law, RiskLevel p);
double rho_of(Rho rho, const SolutionFunction& g, const Law& law, RiskLevel p);
double rho_samples(Rho rho, std::span<const double> samples, RiskLevel p);

// E[B(Y) Y] for a candidate density B with E[B] = 1 and 0 <= B <= 1/(1-p);
// a lower bound for ES_p(Y). Breakpoints mark discontinuities of B.
double es_dual_check(const ScalarDistribution& y, RiskLevel p, const std::function<double(double)>& b,
                     std::vector<double> breakpoints = {});

} // namespace robopt
