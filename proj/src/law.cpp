#include "robopt/law.hpp"

#include "robopt/errors.hpp"
#include "robopt/numerics.hpp"

#include <cmath>

namespace robopt {

double Law::quantile(double t) const
{
    if (!(t > 0.0 && t < 1.0))
        throw DomainError("quantile level must lie in (0,1)");
    auto [slo, shi] = support();
    auto pred = [&](double x) { return cdf(x) >= t - kProbTol; };
    double lo = std::isfinite(slo) ? std::nextafter(slo, -kInf) : -1.0;
    while (pred(lo))
        lo = lo < 0 ? 2 * lo : -1.0;
    double hi = std::isfinite(shi) ? shi : 1.0;
    while (!pred(hi)) {
        hi = hi > 0 ? 2 * hi : 1.0;
        if (!std::isfinite(hi))
            throw NumericError("quantile bracket expansion overflowed", t);
    }
    return numerics::first_true(pred, lo, hi);
}

} // namespace robopt
