#include "robopt/metrics.hpp"

#include "robopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace robopt {

MetricKind MetricKind::lq(double q)
{
    if (!(q >= 1.0) || !std::isfinite(q))
        throw DomainError("Lq metric needs finite q >= 1");
    return {Kind::Lq, q};
}

MetricKind MetricKind::parse(const std::string& s)
{
    if (s == "linf")
        return linf();
    if (s == "prokhorov" || s == "weak")
        return prokhorov();
    if (s.rfind("lq:", 0) == 0) {
        char* end = nullptr;
        double q = std::strtod(s.c_str() + 3, &end);
        if (end == s.c_str() + 3 || *end != '\0')
            throw DomainError("cannot parse metric '" + s + "'");
        return lq(q);
    }
    if (s == "l1")
        return lq(1.0);
    if (s == "l2")
        return lq(2.0);
    throw DomainError("unknown metric '" + s + "'");
}

std::string MetricKind::name() const
{
    switch (kind) {
    case Kind::LInf: return "linf";
    case Kind::Prokhorov: return "prokhorov";
    case Kind::Lq: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "lq:%g", q);
        return buf;
    }
    }
    return "?";
}

double coupled_distance(const MetricKind& kind, std::span<const double> xs, std::span<const double> zs)
{
    if (xs.size() != zs.size())
        throw DomainError("coupled samples differ in length");
    if (xs.empty())
        throw DomainError("empty sample");
    switch (kind.kind) {
    case MetricKind::Kind::LInf: {
        double m = 0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            m = std::max(m, std::fabs(xs[i] - zs[i]));
        return m;
    }
    case MetricKind::Kind::Lq: {
        double s = 0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            s += std::pow(std::fabs(xs[i] - zs[i]), kind.q);
        return std::pow(s / static_cast<double>(xs.size()), 1.0 / kind.q);
    }
    case MetricKind::Kind::Prokhorov: {
        auto a = ScalarDistribution::empirical({xs.begin(), xs.end()});
        auto b = ScalarDistribution::empirical({zs.begin(), zs.end()});
        return prokhorov_discrete(a, b);
    }
    }
    return 0.0;
}

double matched_mass(const ScalarDistribution& mu, const ScalarDistribution& nu, double eps)
{
    // Distances are compared as differences so the window agrees exactly with
    // the candidate set built from |x - y|.
    // Each source atom sees a contiguous window of sink atoms whose ends move
    // monotonically with the source, so serving sources left to right from the
    // leftmost open sink is a maximum flow.
    const auto& x = mu.atom_values();
    const auto& a = mu.atom_weights();
    const auto& y = nu.atom_values();
    std::vector<double> cap = nu.atom_weights();
    std::size_t j0 = 0;
    double matched = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double need = a[i];
        while (j0 < y.size() && (x[i] - y[j0] > eps || cap[j0] <= 0))
            ++j0;
        for (std::size_t j = j0; j < y.size() && need > 0 && y[j] - x[i] <= eps; ++j) {
            if (cap[j] <= 0 || x[i] - y[j] > eps)
                continue;
            double f = std::min(need, cap[j]);
            need -= f;
            cap[j] -= f;
            matched += f;
        }
    }
    return matched;
}

double prokhorov_discrete(const ScalarDistribution& mu, const ScalarDistribution& nu)
{
    if (mu.family() != Family::Empirical || nu.family() != Family::Empirical)
        throw DomainError("prokhorov_discrete needs discrete (empirical) laws");
    const auto& x = mu.atom_values();
    const auto& y = nu.atom_values();

    std::vector<double> d;
    d.reserve(x.size() * y.size() + 1);
    d.push_back(0.0);
    for (double xi : x)
        for (double yj : y) {
            double v = std::fabs(xi - yj);
            if (v < 1.0)
                d.push_back(v);
        }
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());

    // deficiency 1 - M(eps) is a nonincreasing step function; the distance is
    // min over candidates of max(d_k, 1 - M(d_k)), capped at 1
    auto f = [&](std::size_t k) {
        double def = std::max(0.0, 1.0 - matched_mass(mu, nu, d[k]));
        return std::pair{d[k], def};
    };
    std::size_t lo = 0, hi = d.size();
    while (lo < hi) {
        auto mid = lo + (hi - lo) / 2;
        auto [dk, def] = f(mid);
        if (dk >= def)
            hi = mid;
        else
            lo = mid + 1;
    }
    double best = 1.0;
    for (std::size_t k : {lo, lo - 1}) {
        if (k >= d.size())
            continue;
        auto [dk, def] = f(k);
        best = std::min(best, std::max(dk, def));
    }
    return best;
}

ScalarDistribution discretize(const Law& law, std::size_t n)
{
    if (n == 0)
        throw DomainError("discretize needs at least one atom");
    if (auto* sd = dynamic_cast<const ScalarDistribution*>(&law); sd && sd->family() == Family::Empirical)
        return *sd;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = law.quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n));
    return ScalarDistribution::empirical(std::move(v));
}

} // namespace robopt
