#pragma once

#include "robopt/risk_measures.hpp"
#include "robopt/solution_function.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

// Data-parallel building blocks for the Monte Carlo paths. Work is cut into
// fixed chunks, every chunk owns its random engine and partial sum, and the
// partials are combined in chunk order, so the serial and OpenMP versions
// produce identical bits for any thread count.
namespace robopt::kernels {

inline constexpr std::size_t kChunk = 8192;

enum class Exec { Serial, Parallel };

Exec default_exec();
void set_default_exec(Exec e);

using UnaryFn = std::function<double(double)>;
using BinaryFn = std::function<double(double, double)>;

// Random streams: 0 for X, 1 for auxiliary perturbation noise, 2 for adversaries.
enum Stream : std::uint32_t { kStreamX = 0, kStreamAux = 1, kStreamAdversary = 2 };

#define ROBOPT_KERNEL_DECLS                                                                             \
    void fill_uniform(std::uint64_t seed, std::uint32_t stream, std::span<double> out);                 \
    void transform(std::span<const double> in, std::span<double> out, const UnaryFn& f);                \
    void transform2(std::span<const double> a, std::span<const double> b, std::span<double> out,        \
                    const BinaryFn& f);                                                                 \
    void evaluate(const std::vector<Segment>& g, std::span<const double> xs, std::span<double> out);    \
    double sum(std::span<const double> v);                                                              \
    double max_abs_diff(std::span<const double> a, std::span<const double> b);                          \
    double sum_abs_pow(std::span<const double> a, std::span<const double> b, double q);                 \
    std::vector<double> batch_rho(Rho rho, std::span<const double> values, RiskLevel p, std::size_t batches);

namespace serial {
ROBOPT_KERNEL_DECLS
}
namespace parallel {
ROBOPT_KERNEL_DECLS
}

#undef ROBOPT_KERNEL_DECLS

// helpers shared by both implementations
double chunk_uniform(std::uint64_t bits);
double eval_segments(const std::vector<Segment>& g, double x);

inline void fill_uniform(std::uint64_t seed, std::uint32_t stream, std::span<double> out,
                         Exec e = default_exec())
{
    e == Exec::Serial ? serial::fill_uniform(seed, stream, out) : parallel::fill_uniform(seed, stream, out);
}

inline void transform(std::span<const double> in, std::span<double> out, const UnaryFn& f,
                      Exec e = default_exec())
{
    e == Exec::Serial ? serial::transform(in, out, f) : parallel::transform(in, out, f);
}

inline void transform2(std::span<const double> a, std::span<const double> b, std::span<double> out,
                       const BinaryFn& f, Exec e = default_exec())
{
    e == Exec::Serial ? serial::transform2(a, b, out, f) : parallel::transform2(a, b, out, f);
}

inline void evaluate(const std::vector<Segment>& g, std::span<const double> xs, std::span<double> out,
                     Exec e = default_exec())
{
    e == Exec::Serial ? serial::evaluate(g, xs, out) : parallel::evaluate(g, xs, out);
}

inline double sum(std::span<const double> v, Exec e = default_exec())
{
    return e == Exec::Serial ? serial::sum(v) : parallel::sum(v);
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b, Exec e = default_exec())
{
    return e == Exec::Serial ? serial::max_abs_diff(a, b) : parallel::max_abs_diff(a, b);
}

inline double sum_abs_pow(std::span<const double> a, std::span<const double> b, double q,
                          Exec e = default_exec())
{
    return e == Exec::Serial ? serial::sum_abs_pow(a, b, q) : parallel::sum_abs_pow(a, b, q);
}

inline std::vector<double> batch_rho(Rho rho, std::span<const double> values, RiskLevel p,
                                     std::size_t batches, Exec e = default_exec())
{
    return e == Exec::Serial ? serial::batch_rho(rho, values, p, batches)
                             : parallel::batch_rho(rho, values, p, batches);
}

} // namespace robopt::kernels
