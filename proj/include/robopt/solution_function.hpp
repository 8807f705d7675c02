#pragma once

#include "robopt/interval_set.hpp"
#include "robopt/market_model.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace robopt {

struct Piece {
    enum class Kind { Identity, MinWithConst, Const, ConvexMix, Affine };

    Kind kind = Kind::Identity;
    double value = 0.0;   // cap for MinWithConst and ConvexMix, level for Const
    double lambda = 0.0;  // weight of the capped part in ConvexMix

    static Piece identity() { return {Kind::Identity, 0.0, 0.0}; }
    static Piece min_with(double v) { return {Kind::MinWithConst, v, 0.0}; }
    static Piece constant(double v) { return {Kind::Const, v, 0.0}; }
    // (1 - lambda) x + lambda (x ^ r)
    static Piece convex_mix(double lambda, double r) { return {Kind::ConvexMix, r, lambda}; }
    // intercept + slope x, used for composed positions
    static Piece affine(double intercept, double slope) { return {Kind::Affine, intercept, slope}; }

    double operator()(double x) const;
    std::string describe() const;
};

struct Region {
    IntervalSet set;
    Piece piece;
};

// g(x) = intercept + slope * x on (lo, hi]
struct Segment {
    double lo;
    double hi;
    double intercept;
    double slope;

    double at(double x) const { return intercept + slope * x; }
};

struct Jump {
    double location;
    double size;  // right limit minus value at the location
};

enum class Continuity { Continuous, ContinuousLinearGrowth, Discontinuous };

std::string to_string(Continuity c);

struct SolutionMeta {
    std::string problem;
    std::string form;
    std::optional<double> q;
    std::optional<double> q_prime;
    std::optional<double> c;
    std::optional<double> r;
    std::optional<double> lambda;
    std::optional<double> threshold;
    std::optional<double> epsilon;
    std::vector<double> q_roots;
    bool multiple_roots = false;
    bool unique = true;
    double objective = std::numeric_limits<double>::quiet_NaN();
    double budget = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> notes;
    AssumptionReport assumptions;
};

// Piecewise position g: regions partition the real line, each carrying one
// piece. Evaluated through a flattened list of linear segments.
class SolutionFunction {
public:
    explicit SolutionFunction(std::vector<Region> regions, SolutionMeta meta = {});
    static SolutionFunction constant(double v, SolutionMeta meta = {});
    static SolutionFunction from_segments(std::vector<Segment> segs, SolutionMeta meta = {});

    double operator()(double x) const;
    double evaluate(double x) const { return (*this)(x); }

    const std::vector<Region>& regions() const { return regions_; }
    const std::vector<Segment>& segments() const { return segments_; }
    const SolutionMeta& meta() const { return meta_; }
    SolutionMeta& meta() { return meta_; }

    std::vector<Jump> jumps() const;
    Continuity continuity() const;
    // values the position can take at segment ends, used to snap quantiles
    std::vector<double> level_values() const;
    // {x : g(x) > t}
    IntervalSet above(double t) const;

private:
    std::vector<Region> regions_;
    std::vector<Segment> segments_;
    SolutionMeta meta_;
};

// Budget E[gamma(X) g(X)].
double budget(const MarketModel& model, const SolutionFunction& g);
double budget(const MarketModel& model, const std::vector<Segment>& segs);

} // namespace robopt
