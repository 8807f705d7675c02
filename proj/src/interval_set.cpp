#include "robopt/interval_set.hpp"

#include <algorithm>
#include <cstdio>

namespace robopt {

IntervalSet::IntervalSet(std::vector<Interval> parts)
{
    std::erase_if(parts, [](const Interval& iv) { return iv.empty(); });
    std::sort(parts.begin(), parts.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (const auto& iv : parts) {
        if (!parts_.empty() && iv.lo <= parts_.back().hi)
            parts_.back().hi = std::max(parts_.back().hi, iv.hi);
        else
            parts_.push_back(iv);
    }
}

bool IntervalSet::contains(double x) const
{
    auto it = std::lower_bound(parts_.begin(), parts_.end(), x,
                               [](const Interval& iv, double v) { return iv.hi < v; });
    return it != parts_.end() && it->contains(x);
}

IntervalSet IntervalSet::complement() const
{
    std::vector<Interval> out;
    double cursor = -kInf;
    for (const auto& iv : parts_) {
        if (cursor < iv.lo)
            out.push_back({cursor, iv.lo});
        cursor = iv.hi;
    }
    if (cursor < kInf)
        out.push_back({cursor, kInf});
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::intersect(const Interval& iv) const
{
    std::vector<Interval> out;
    for (const auto& p : parts_)
        out.push_back({std::max(p.lo, iv.lo), std::min(p.hi, iv.hi)});
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const
{
    std::vector<Interval> out;
    for (const auto& a : parts_)
        for (const auto& b : other.parts_)
            out.push_back({std::max(a.lo, b.lo), std::min(a.hi, b.hi)});
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const
{
    auto all = parts_;
    all.insert(all.end(), other.parts_.begin(), other.parts_.end());
    return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::widen(double eps) const
{
    std::vector<Interval> out;
    for (const auto& p : parts_)
        out.push_back({p.lo - eps, p.hi + eps});
    return IntervalSet(std::move(out));
}

std::string IntervalSet::to_string() const
{
    if (parts_.empty())
        return "{}";
    std::string s;
    char buf[96];
    for (const auto& p : parts_) {
        if (!s.empty())
            s += " U ";
        std::snprintf(buf, sizeof buf, "(%.17g, %.17g]", p.lo, p.hi);
        s += buf;
    }
    return s;
}

bool operator==(const IntervalSet& a, const IntervalSet& b)
{
    if (a.parts_.size() != b.parts_.size())
        return false;
    for (std::size_t i = 0; i < a.parts_.size(); ++i)
        if (a.parts_[i].lo != b.parts_[i].lo || a.parts_[i].hi != b.parts_[i].hi)
            return false;
    return true;
}

} // namespace robopt
