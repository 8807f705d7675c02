#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>

namespace robopt::numerics {

// Monotone map between doubles and int64 so that bisection can run over the
// representable values themselves (at most 64 steps to adjacent doubles).
inline std::int64_t to_ordered(double x)
{
    auto bits = std::bit_cast<std::int64_t>(x);
    return bits >= 0 ? bits : std::numeric_limits<std::int64_t>::min() - bits;
}

inline double from_ordered(std::int64_t o)
{
    auto bits = o >= 0 ? o : std::numeric_limits<std::int64_t>::min() - o;
    return std::bit_cast<double>(bits);
}

// Smallest representable x in (lo, hi] with pred(x) true, assuming pred is
// monotone (false ... false true ... true) on [lo, hi], pred(lo) false and
// pred(hi) true.
template <class Pred>
double first_true(Pred&& pred, double lo, double hi)
{
    auto a = to_ordered(lo);
    auto b = to_ordered(hi);
    // the span can exceed int64 when the bracket straddles zero widely
    while (a < b - 1) {
        auto mid = std::midpoint(a, b);
        if (pred(from_ordered(mid)))
            b = mid;
        else
            a = mid;
    }
    return from_ordered(b);
}

// Adaptive Gauss-Kronrod on (lo, hi); either end may be infinite. Throws
// NumericError when the error estimate exceeds abs_tol.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol = 1e-10);

struct RootResult {
    double root = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

// Bracketed root of f on [lo, hi] with f(lo) and f(hi) of opposite sign:
// bisection with secant acceleration whenever the secant step stays inside
// the current bracket. Stops when |f| <= f_tol or the bracket collapses.
RootResult bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                          double f_tol = 1e-12, int max_iter = 300);

// Golden-section minimisation on [lo, hi]. Returns the best abscissa seen.
double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          int iterations = 100);

} // namespace robopt::numerics
