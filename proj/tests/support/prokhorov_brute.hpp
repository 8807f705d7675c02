#pragma once

// Brute-force Prokhorov distance between two finite discrete laws straight
// from the defining condition mu(A) <= nu(A^eps) + eps, enumerating every
// subset A of mu's atoms. Exponential in the atom count; for tiny instances.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace brute {

struct Atoms {
    std::vector<double> x;
    std::vector<double> w;
};

// max over A of mu(A) - nu(A^eps), closed neighbourhoods
inline double deficiency(const Atoms& mu, const Atoms& nu, double eps)
{
    const std::size_t n = mu.x.size();
    double worst = 0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        double ma = 0, na = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i))
                ma += mu.w[i];
        for (std::size_t j = 0; j < nu.x.size(); ++j) {
            bool near = false;
            for (std::size_t i = 0; i < n && !near; ++i)
                near = (mask & (1u << i)) && std::fabs(mu.x[i] - nu.x[j]) <= eps;
            if (near)
                na += nu.w[j];
        }
        worst = std::max(worst, ma - na);
    }
    return worst;
}

inline double prokhorov(const Atoms& mu, const Atoms& nu)
{
    // the deficiency is a step function changing only at pairwise distances
    std::vector<double> d{0.0};
    for (double a : mu.x)
        for (double b : nu.x)
            d.push_back(std::fabs(a - b));
    std::sort(d.begin(), d.end());
    double best = 1.0;
    for (double dk : d)
        best = std::min(best, std::max(dk, deficiency(mu, nu, dk)));
    return best;
}

} // namespace brute
