#pragma once

#include "robopt/distribution.hpp"
#include "robopt/law.hpp"

#include <span>
#include <string>

namespace robopt {

struct MetricKind {
    enum class Kind { LInf, Lq, Prokhorov };

    Kind kind = Kind::LInf;
    double q = 1.0;

    static MetricKind linf() { return {Kind::LInf, 1.0}; }
    static MetricKind lq(double q);
    static MetricKind prokhorov() { return {Kind::Prokhorov, 1.0}; }
    static MetricKind parse(const std::string& s);

    std::string name() const;
    friend bool operator==(const MetricKind&, const MetricKind&) = default;
};

// Index-coupled distance between two sample arrays. Prokhorov ignores the
// coupling and compares the two empirical marginals.
double coupled_distance(const MetricKind& kind, std::span<const double> xs, std::span<const double> zs);

// Exact Prokhorov distance between two finite discrete laws.
double prokhorov_discrete(const ScalarDistribution& mu, const ScalarDistribution& nu);

// Largest mass that can be coupled within distance eps (closed window).
double matched_mass(const ScalarDistribution& mu, const ScalarDistribution& nu, double eps);

// n atoms of weight 1/n at the quantiles (i - 1/2)/n.
ScalarDistribution discretize(const Law& law, std::size_t n = 1000);

} // namespace robopt
