#pragma once

#include "robopt/market_model.hpp"
#include "robopt/metrics.hpp"
#include "robopt/perturbations.hpp"
#include "robopt/problem.hpp"
#include "robopt/risk_measures.hpp"
#include "robopt/solution_function.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace robopt {

enum class Verdict { Robust, NonRobust, Inconclusive };
std::string to_string(Verdict v);

struct ProbePoint {
    double eps = 0;                       // family parameter
    double distance = 0;                  // distance of Z_eps from X under the metric
    bool distance_exact = false;          // false: distance is an upper bound
    std::optional<double> measured_distance;  // on the coupled samples (LInf, Lq)
    double rho_at_z = 0;
    double rho_at_x = 0;
    double gap = 0;                       // rho(g(Z)) - rho(g(X))
    std::string method;                   // "analytic" or "monte_carlo"
    std::optional<double> mc_rho_at_z;
    double mc_stderr = 0;                 // batch-means standard error of mc_rho_at_z
    double stderr_used = 0;               // error of the value the verdict sees
    std::optional<double> optimality_gap;    // rho(g_Z(Z)) - rho(g_X(Z))
    std::optional<double> optimality_shift;  // rho(g_Z(Z)) - rho(g_X(X))
};

struct VerdictResult {
    Verdict verdict = Verdict::Inconclusive;
    double limit_gap_estimate = 0;
    double threshold = 0;
    std::string reason;
};

// Decision rule on the three smallest distances (distances strictly
// decreasing). tau = 10 (max stderr + 1e-6), L = least-squares intercept of
// gap against distance.
//   NonRobust: every |gap| > tau with one sign, |L| > tau, |L| >= |gap_min| / 2
//   Robust:    |gap| nonincreasing up to tau, and |gap_min| <= tau or
//              |L| < |gap_min| / 2
VerdictResult decide_verdict(const std::vector<double>& distances, const std::vector<double>& gaps,
                             const std::vector<double>& stderrs);

struct RobustnessReport {
    MetricKind metric;
    Rho rho = Rho::VaR;
    double p = 0;
    std::string family;
    std::vector<double> eps_grid;
    std::vector<ProbePoint> points;
    double limit_gap_estimate = 0;
    double threshold = 0;
    Verdict verdict = Verdict::Inconclusive;
    std::string verdict_reason;
    SolutionMeta solution_meta;
    std::vector<std::string> notes;

    std::vector<std::pair<double, double>> gap_curve() const;
};

// Problem data used to re-solve at a parametric Z for the optimality gap.
struct ResolveContext {
    ProblemSpec spec;
    std::optional<double> dro_epsilon;
};

struct ProbeOptions {
    std::size_t n_samples = 1'000'000;  // 0 disables the Monte Carlo cross-check
    std::uint64_t seed = 1;
    std::size_t batches = 20;
    std::optional<ResolveContext> resolve;
};

// rho(g(Z_eps)) along the family. The exact pushforward is used whenever the
// law of Z_eps evaluates cleanly; Monte Carlo with the same seed at every eps
// is the cross-check and the fallback.
RobustnessReport probe(const MarketModel& model, const SolutionFunction& g, Rho rho, RiskLevel p,
                       const PerturbationFamily& family, const MetricKind& metric, const std::vector<double>& eps_grid,
                       const ProbeOptions& opts = {});

// Metrics under which rho itself is continuous.
struct RhoContinuity {
    bool linf = false;
    bool lq = false;
    bool prokhorov = false;

    static RhoContinuity of(Rho rho);
};

enum class Guarantee { GuaranteedRobust, NoGuarantee };
std::string to_string(Guarantee g);

// Sufficient condition: continuous g with an L-infinity continuous rho,
// continuous linearly growing g with an Lq continuous rho, or continuous g
// with a weakly continuous rho.
Guarantee check_continuity_criterion(const SolutionFunction& g, RhoContinuity rc, const MetricKind& metric);

} // namespace robopt
