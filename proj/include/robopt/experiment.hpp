#pragma once

#include "robopt/market_model.hpp"
#include "robopt/metrics.hpp"
#include "robopt/perturbations.hpp"
#include "robopt/problem.hpp"
#include "robopt/robustness_probe.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace robopt {

inline constexpr int kSchemaVersion = 1;

struct PerturbConfig {
    std::string kind;
    nlohmann::json params;
    std::vector<double> eps_grid;
};

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    std::string name;
    nlohmann::json model_block;
    nlohmann::json problem_block;
    ScalarDistribution x = ScalarDistribution::point_mass(0.0);
    PricingDensity gamma;
    ProblemSpec problem{RiskLevel(0.5)};
    std::optional<double> dro_epsilon;
    Rho rho = Rho::VaR;
    PerturbConfig perturb;
    std::vector<MetricKind> metrics;
    std::size_t n_samples = 100'000;
    std::uint64_t seed = 0;
    std::string out_dir;
};

// Throws ValidationError on any schema or range problem.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

ScalarDistribution parse_distribution(const nlohmann::json& j);
PricingDensity parse_gamma(const nlohmann::json& j);

struct ExperimentResult {
    ExperimentConfig config;
    MarketModel model;
    AssumptionReport assumptions;
    SolutionFunction solution;
    std::vector<RobustnessReport> reports;  // one per metric; empty for solve
};

PerturbationFamily make_family(const ExperimentConfig& cfg, const MarketModel& model, const SolutionFunction& g);

ExperimentResult run_solve(const ExperimentConfig& cfg);
ExperimentResult run_probe(const ExperimentConfig& cfg);

nlohmann::json assumptions_json(const AssumptionReport& r);
nlohmann::json solution_json(const ExperimentResult& r);
nlohmann::json report_json(const ExperimentResult& r);
std::string gap_curve_csv(const ExperimentResult& r);

struct Comparison {
    std::string summary_csv;
    std::string gaps_csv;
};

// Both configs must describe the same model and problem.
Comparison compare(const ExperimentResult& a, const ExperimentResult& b);
void check_comparable(const ExperimentConfig& a, const ExperimentConfig& b);

// 17 significant digits; inf and nan spelled out
std::string fmt17(double v);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace robopt
