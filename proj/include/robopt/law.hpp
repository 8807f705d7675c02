#pragma once

#include "robopt/interval_set.hpp"

#include <utility>
#include <vector>

namespace robopt {

// Slack used when comparing cumulative probabilities against a level p.
inline constexpr double kProbTol = 1e-12;

// A real-valued law known through interval probabilities and first moments.
// Everything downstream (pushforward VaR/ES, budgets) is assembled from these.
class Law {
public:
    virtual ~Law() = default;

    // P(lo < Y <= hi)
    virtual double prob(double lo, double hi) const = 0;
    // E[Y 1{lo < Y <= hi}]
    virtual double first_moment(double lo, double hi) const = 0;
    // closed hull of the support, endpoints may be infinite
    virtual std::pair<double, double> support() const = 0;
    // points carrying positive mass (empty for atomless laws)
    virtual std::vector<double> atoms() const { return {}; }

    double cdf(double x) const { return prob(-kInf, x); }
    double mean() const { return first_moment(-kInf, kInf); }

    // Left inverse of the cdf. The default bisects on the cdf.
    virtual double quantile(double t) const;
};

} // namespace robopt
