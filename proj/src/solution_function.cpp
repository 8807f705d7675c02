#include "robopt/solution_function.hpp"

#include "robopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace robopt {

double Piece::operator()(double x) const
{
    switch (kind) {
    case Kind::Identity: return x;
    case Kind::MinWithConst: return std::min(x, value);
    case Kind::Const: return value;
    case Kind::ConvexMix: return (1 - lambda) * x + lambda * std::min(x, value);
    case Kind::Affine: return value + lambda * x;
    }
    return 0.0;
}

std::string Piece::describe() const
{
    char buf[128];
    switch (kind) {
    case Kind::Identity: return "x";
    case Kind::MinWithConst: std::snprintf(buf, sizeof buf, "min(x, %.17g)", value); break;
    case Kind::Const: std::snprintf(buf, sizeof buf, "%.17g", value); break;
    case Kind::ConvexMix:
        std::snprintf(buf, sizeof buf, "(1 - %.17g) x + %.17g min(x, %.17g)", lambda, lambda, value);
        break;
    case Kind::Affine: std::snprintf(buf, sizeof buf, "%.17g + %.17g x", value, lambda); break;
    }
    return buf;
}

std::string to_string(Continuity c)
{
    switch (c) {
    case Continuity::Continuous: return "continuous";
    case Continuity::ContinuousLinearGrowth: return "continuous_linear_growth";
    case Continuity::Discontinuous: return "discontinuous";
    }
    return "?";
}

namespace {

void push_segment(std::vector<Segment>& out, double lo, double hi, double a, double b)
{
    if (!(lo < hi))
        return;
    out.push_back({lo, hi, a, b});
}

void normalize(std::vector<Segment>& segs)
{
    std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.lo < y.lo; });
    if (segs.empty() || segs.front().lo != -kInf || segs.back().hi != kInf)
        throw DomainError("solution regions must cover the real line");
    std::vector<Segment> merged;
    for (const auto& s : segs) {
        if (!merged.empty()) {
            auto& last = merged.back();
            if (s.lo != last.hi)
                throw DomainError("solution regions must be disjoint and contiguous");
            if (s.intercept == last.intercept && s.slope == last.slope) {
                last.hi = s.hi;
                continue;
            }
        }
        merged.push_back(s);
    }
    segs = std::move(merged);
}

} // namespace

SolutionFunction::SolutionFunction(std::vector<Region> regions, SolutionMeta meta)
    : regions_(std::move(regions)), meta_(std::move(meta))
{
    for (const auto& reg : regions_) {
        const auto& p = reg.piece;
        for (const auto& iv : reg.set.parts()) {
            switch (p.kind) {
            case Piece::Kind::Identity: push_segment(segments_, iv.lo, iv.hi, 0.0, 1.0); break;
            case Piece::Kind::Const: push_segment(segments_, iv.lo, iv.hi, p.value, 0.0); break;
            case Piece::Kind::MinWithConst:
                push_segment(segments_, iv.lo, std::min(iv.hi, p.value), 0.0, 1.0);
                push_segment(segments_, std::max(iv.lo, p.value), iv.hi, p.value, 0.0);
                break;
            case Piece::Kind::ConvexMix:
                if (!(p.lambda >= 0 && p.lambda <= 1))
                    throw DomainError("convex mix weight must lie in [0,1]");
                push_segment(segments_, iv.lo, std::min(iv.hi, p.value), 0.0, 1.0);
                push_segment(segments_, std::max(iv.lo, p.value), iv.hi, p.lambda * p.value,
                             1.0 - p.lambda);
                break;
            case Piece::Kind::Affine:
                if (p.lambda < 0)
                    throw DomainError("affine pieces must be nondecreasing");
                push_segment(segments_, iv.lo, iv.hi, p.value, p.lambda);
                break;
            }
        }
    }
    normalize(segments_);
}

SolutionFunction SolutionFunction::constant(double v, SolutionMeta meta)
{
    if (meta.form.empty())
        meta.form = "constant";
    return SolutionFunction({Region{IntervalSet::all(), Piece::constant(v)}}, std::move(meta));
}

SolutionFunction SolutionFunction::from_segments(std::vector<Segment> segs, SolutionMeta meta)
{
    SolutionFunction g({Region{IntervalSet::all(), Piece::constant(0.0)}}, std::move(meta));
    for (const auto& s : segs)
        if (s.slope < 0)
            throw DomainError("segments must be nondecreasing");
    normalize(segs);
    g.segments_ = std::move(segs);
    g.regions_.clear();
    for (const auto& s : g.segments_) {
        Piece p = s.slope == 0 ? Piece::constant(s.intercept)
                  : (s.slope == 1 && s.intercept == 0) ? Piece::identity()
                                                        : Piece::affine(s.intercept, s.slope);
        g.regions_.push_back({IntervalSet::between(s.lo, s.hi), p});
    }
    return g;
}

double SolutionFunction::operator()(double x) const
{
    auto it = std::lower_bound(segments_.begin(), segments_.end(), x,
                               [](const Segment& s, double v) { return s.hi < v; });
    if (it == segments_.end())
        it = std::prev(segments_.end());
    return it->at(x);
}

std::vector<Jump> SolutionFunction::jumps() const
{
    std::vector<Jump> out;
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
        double x = segments_[i].hi;
        double left = segments_[i].at(x);
        double right = segments_[i + 1].at(x);
        if (std::fabs(right - left) > 1e-12 * (1 + std::fabs(left)))
            out.push_back({x, right - left});
    }
    return out;
}

Continuity SolutionFunction::continuity() const
{
    // piecewise linear without jumps grows at most linearly
    return jumps().empty() ? Continuity::ContinuousLinearGrowth : Continuity::Discontinuous;
}

std::vector<double> SolutionFunction::level_values() const
{
    std::vector<double> v;
    for (const auto& s : segments_) {
        if (s.slope == 0) {
            v.push_back(s.intercept);
            continue;
        }
        if (std::isfinite(s.lo))
            v.push_back(s.at(s.lo));
        if (std::isfinite(s.hi))
            v.push_back(s.at(s.hi));
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

IntervalSet SolutionFunction::above(double t) const
{
    std::vector<Interval> parts;
    for (const auto& s : segments_) {
        if (s.slope > 0) {
            double l = std::max(s.lo, (t - s.intercept) / s.slope);
            if (l < s.hi)
                parts.push_back({l, s.hi});
        } else if (s.intercept > t) {
            parts.push_back({s.lo, s.hi});
        }
    }
    return IntervalSet(std::move(parts));
}

double budget(const MarketModel& model, const std::vector<Segment>& segs)
{
    double total = 0;
    for (const auto& s : segs) {
        auto set = IntervalSet::between(s.lo, s.hi);
        if (s.intercept != 0)
            total += s.intercept * model.gamma_mass(set);
        if (s.slope != 0)
            total += s.slope * model.gamma_first(set);
    }
    return total;
}

double budget(const MarketModel& model, const SolutionFunction& g)
{
    return budget(model, g.segments());
}

} // namespace robopt
