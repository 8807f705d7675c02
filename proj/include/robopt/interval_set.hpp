#pragma once

#include <limits>
#include <string>
#include <vector>

namespace robopt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Half-open interval (lo, hi]. lo may be -inf, hi may be +inf.
struct Interval {
    double lo = -kInf;
    double hi = kInf;

    bool empty() const { return !(lo < hi); }
    bool contains(double x) const { return lo < x && x <= hi; }
};

// Finite union of disjoint half-open intervals, kept sorted and merged.
class IntervalSet {
public:
    IntervalSet() = default;
    explicit IntervalSet(std::vector<Interval> parts);

    static IntervalSet all() { return IntervalSet({Interval{}}); }
    static IntervalSet above(double t) { return IntervalSet({Interval{t, kInf}}); }
    static IntervalSet at_most(double t) { return IntervalSet({Interval{-kInf, t}}); }
    static IntervalSet between(double lo, double hi) { return IntervalSet({Interval{lo, hi}}); }

    const std::vector<Interval>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    bool contains(double x) const;

    IntervalSet complement() const;
    IntervalSet intersect(const Interval& iv) const;
    IntervalSet intersect(const IntervalSet& other) const;
    IntervalSet unite(const IntervalSet& other) const;

    // Closed eps-neighbourhood, returned in half-open form (lo - eps, hi + eps].
    IntervalSet widen(double eps) const;

    double inf() const { return parts_.empty() ? kInf : parts_.front().lo; }
    double sup() const { return parts_.empty() ? -kInf : parts_.back().hi; }

    std::string to_string() const;

    friend bool operator==(const IntervalSet& a, const IntervalSet& b);

private:
    std::vector<Interval> parts_;
};

} // namespace robopt
