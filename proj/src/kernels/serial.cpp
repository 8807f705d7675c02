#include "robopt/kernels.hpp"

#include "robopt/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>

namespace robopt::kernels {

namespace {
std::atomic<Exec> g_exec{Exec::Parallel};
}

Exec default_exec() { return g_exec.load(); }
void set_default_exec(Exec e) { g_exec.store(e); }

double chunk_uniform(std::uint64_t bits)
{
    // 53 random bits placed in the open interval (0,1)
    return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

double eval_segments(const std::vector<Segment>& g, double x)
{
    auto it = std::lower_bound(g.begin(), g.end(), x, [](const Segment& s, double v) { return s.hi < v; });
    if (it == g.end())
        --it;
    return it->at(x);
}

namespace serial {

void fill_uniform(std::uint64_t seed, std::uint32_t stream, std::span<double> out)
{
    std::size_t chunks = (out.size() + kChunk - 1) / kChunk;
    for (std::size_t c = 0; c < chunks; ++c) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream,
                          static_cast<std::uint32_t>(c)};
        std::mt19937_64 eng(seq);
        std::size_t end = std::min(out.size(), (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i)
            out[i] = chunk_uniform(eng());
    }
}

void transform(std::span<const double> in, std::span<double> out, const UnaryFn& f)
{
    for (std::size_t i = 0; i < in.size(); ++i)
        out[i] = f(in[i]);
}

void transform2(std::span<const double> a, std::span<const double> b, std::span<double> out, const BinaryFn& f)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = f(a[i], b[i]);
}

void evaluate(const std::vector<Segment>& g, std::span<const double> xs, std::span<double> out)
{
    for (std::size_t i = 0; i < xs.size(); ++i)
        out[i] = eval_segments(g, xs[i]);
}

double sum(std::span<const double> v)
{
    std::size_t chunks = (v.size() + kChunk - 1) / kChunk;
    double total = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
        double part = 0;
        std::size_t end = std::min(v.size(), (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i)
            part += v[i];
        total += part;
    }
    return total;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

double sum_abs_pow(std::span<const double> a, std::span<const double> b, double q)
{
    std::size_t chunks = (a.size() + kChunk - 1) / kChunk;
    double total = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
        double part = 0;
        std::size_t end = std::min(a.size(), (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i)
            part += std::pow(std::fabs(a[i] - b[i]), q);
        total += part;
    }
    return total;
}

std::vector<double> batch_rho(Rho rho, std::span<const double> values, RiskLevel p, std::size_t batches)
{
    if (batches == 0 || values.size() < batches)
        throw DomainError("batch_rho needs at least one sample per batch");
    std::vector<double> out(batches);
    for (std::size_t b = 0; b < batches; ++b) {
        std::size_t lo = b * values.size() / batches, hi = (b + 1) * values.size() / batches;
        out[b] = rho_samples(rho, values.subspan(lo, hi - lo), p);
    }
    return out;
}

} // namespace serial
} // namespace robopt::kernels
