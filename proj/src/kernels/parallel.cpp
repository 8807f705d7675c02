#include "robopt/kernels.hpp"

#include "robopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace robopt::kernels::parallel {

namespace {

std::ptrdiff_t chunk_count(std::size_t n)
{
    return static_cast<std::ptrdiff_t>((n + kChunk - 1) / kChunk);
}

} // namespace

void fill_uniform(std::uint64_t seed, std::uint32_t stream, std::span<double> out)
{
    const auto chunks = chunk_count(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < chunks; ++c) {
        auto cu = static_cast<std::size_t>(c);
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream,
                          static_cast<std::uint32_t>(cu)};
        std::mt19937_64 eng(seq);
        std::size_t end = std::min(out.size(), (cu + 1) * kChunk);
        for (std::size_t i = cu * kChunk; i < end; ++i)
            out[i] = chunk_uniform(eng());
    }
}

void transform(std::span<const double> in, std::span<double> out, const UnaryFn& f)
{
    const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = f(in[static_cast<std::size_t>(i)]);
}

void transform2(std::span<const double> a, std::span<const double> b, std::span<double> out, const BinaryFn& f)
{
    const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        auto k = static_cast<std::size_t>(i);
        out[k] = f(a[k], b[k]);
    }
}

void evaluate(const std::vector<Segment>& g, std::span<const double> xs, std::span<double> out)
{
    const auto n = static_cast<std::ptrdiff_t>(xs.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = eval_segments(g, xs[static_cast<std::size_t>(i)]);
}

double sum(std::span<const double> v)
{
    const auto chunks = chunk_count(v.size());
    std::vector<double> part(static_cast<std::size_t>(chunks), 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < chunks; ++c) {
        auto cu = static_cast<std::size_t>(c);
        double s = 0;
        std::size_t end = std::min(v.size(), (cu + 1) * kChunk);
        for (std::size_t i = cu * kChunk; i < end; ++i)
            s += v[i];
        part[cu] = s;
    }
    double total = 0;
    for (double s : part)
        total += s;
    return total;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    const auto chunks = chunk_count(a.size());
    std::vector<double> part(static_cast<std::size_t>(chunks), 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < chunks; ++c) {
        auto cu = static_cast<std::size_t>(c);
        double m = 0;
        std::size_t end = std::min(a.size(), (cu + 1) * kChunk);
        for (std::size_t i = cu * kChunk; i < end; ++i)
            m = std::max(m, std::fabs(a[i] - b[i]));
        part[cu] = m;
    }
    double m = 0;
    for (double s : part)
        m = std::max(m, s);
    return m;
}

double sum_abs_pow(std::span<const double> a, std::span<const double> b, double q)
{
    const auto chunks = chunk_count(a.size());
    std::vector<double> part(static_cast<std::size_t>(chunks), 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < chunks; ++c) {
        auto cu = static_cast<std::size_t>(c);
        double s = 0;
        std::size_t end = std::min(a.size(), (cu + 1) * kChunk);
        for (std::size_t i = cu * kChunk; i < end; ++i)
            s += std::pow(std::fabs(a[i] - b[i]), q);
        part[cu] = s;
    }
    double total = 0;
    for (double s : part)
        total += s;
    return total;
}

std::vector<double> batch_rho(Rho rho, std::span<const double> values, RiskLevel p, std::size_t batches)
{
    if (batches == 0 || values.size() < batches)
        throw DomainError("batch_rho needs at least one sample per batch");
    std::vector<double> out(batches);
    const auto nb = static_cast<std::ptrdiff_t>(batches);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t b = 0; b < nb; ++b) {
        auto bu = static_cast<std::size_t>(b);
        std::size_t lo = bu * values.size() / batches, hi = (bu + 1) * values.size() / batches;
        out[bu] = rho_samples(rho, values.subspan(lo, hi - lo), p);
    }
    return out;
}

} // namespace robopt::kernels::parallel
