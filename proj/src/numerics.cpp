#include "robopt/numerics.hpp"

#include "robopt/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

namespace robopt::numerics {

double integrate(const std::function<double(double)>& f, double lo, double hi, double abs_tol)
{
    if (!(lo < hi))
        return 0.0;
    double err = 0.0;
    double val = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, lo, hi, 15, 1e-13, &err);
    if (!std::isfinite(val) || err > std::max(abs_tol, 1e-12 * std::fabs(val)))
        throw NumericError("quadrature on (" + std::to_string(lo) + ", " + std::to_string(hi) +
                               ") did not reach tolerance",
                           err);
    return val;
}

RootResult bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                          double f_tol, int max_iter)
{
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0)
        return {lo, 0.0, 0};
    if (fhi == 0.0)
        return {hi, 0.0, 0};
    if ((flo > 0) == (fhi > 0))
        throw NumericError("root not bracketed on [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "]",
                           std::min(std::fabs(flo), std::fabs(fhi)));

    RootResult best{std::fabs(flo) < std::fabs(fhi) ? lo : hi,
                    std::min(std::fabs(flo), std::fabs(fhi)), 0};
    for (int it = 1; it <= max_iter; ++it) {
        double x = lo - flo * (hi - lo) / (fhi - flo);
        double width = hi - lo;
        // fall back to bisection when the secant step hugs an endpoint
        if (!(x > lo + 0.05 * width && x < hi - 0.05 * width))
            x = lo + 0.5 * width;
        double fx = f(x);
        if (std::fabs(fx) < best.residual)
            best = {x, std::fabs(fx), it};
        best.iterations = it;
        if (fx == 0.0 || std::fabs(fx) <= f_tol)
            return best;
        if ((fx > 0) == (flo > 0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(lo)))
            return best;
    }
    if (best.residual > 1e3 * f_tol)
        throw NumericError("bracketed root did not converge", best.residual);
    return best;
}

double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          int iterations)
{
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = f(x1), f2 = f(x2);
    double best_x = f1 <= f2 ? x1 : x2, best_f = std::min(f1, f2);
    for (int i = 0; i < iterations && b - a > 1e-15 * (1 + std::fabs(a)); ++i) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
            if (f1 < best_f) {
                best_f = f1;
                best_x = x1;
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
            if (f2 < best_f) {
                best_f = f2;
                best_x = x2;
            }
        }
    }
    return best_x;
}

} // namespace robopt::numerics
