// robopt: solve, probe, compare, check-assumptions
#include "robopt/errors.hpp"
#include "robopt/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace robopt;

namespace {

struct Common {
    std::string config;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
};

ExperimentConfig load(const Common& c)
{
    auto cfg = load_config(c.config);
    if (c.seed)
        cfg.seed = *c.seed;
    if (c.samples)
        cfg.n_samples = *c.samples;
    return cfg;
}

fs::path out_dir(const Common& c, const ExperimentConfig& cfg)
{
    if (!c.out_dir.empty())
        return c.out_dir;
    if (!cfg.out_dir.empty())
        return cfg.out_dir;
    return fs::path("out") / cfg.name;
}

void add_common(CLI::App* sub, Common& c, bool with_config = true)
{
    if (with_config)
        sub->add_option("--config", c.config, "experiment config (JSON)")->required();
    sub->add_option("--out-dir", c.out_dir, "output directory");
    sub->add_option("--seed", c.seed, "overrides the config seed");
    sub->add_option("--samples", c.samples, "Monte Carlo samples per eps");
}

int guarded(const std::function<void()>& body)
{
    try {
        body();
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const AssumptionError& e) {
        std::cerr << "assumption error: " << e.what() << "\n";
        return 3;
    } catch (const NonexistenceError& e) {
        std::cerr << "no optimizer exists: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << " (residual " << fmt17(e.residual()) << ")\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Risk-optimal positions and their robustness under model perturbation"};
    app.require_subcommand(1);

    Common solve_opts, probe_opts, check_opts, cmp_opts;
    auto* solve_cmd = app.add_subcommand("solve", "solve the configured problem, write solution.json");
    add_common(solve_cmd, solve_opts);
    auto* probe_cmd = app.add_subcommand("probe", "solve and probe, write solution.json, gap_curve.csv, report.json");
    add_common(probe_cmd, probe_opts);
    auto* check_cmd = app.add_subcommand("check-assumptions", "print the assumption report");
    add_common(check_cmd, check_opts);
    auto* cmp_cmd = app.add_subcommand("compare", "probe two configs and tabulate them side by side");
    std::vector<std::string> cmp_positional, cmp_flagged;
    cmp_cmd->add_option("configs", cmp_positional, "two experiment configs");
    cmp_cmd->add_option("--config", cmp_flagged, "experiment config, may be given twice");
    add_common(cmp_cmd, cmp_opts, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (*solve_cmd)
        return guarded([&] {
            auto cfg = load(solve_opts);
            auto r = run_solve(cfg);
            auto dir = out_dir(solve_opts, cfg);
            auto text = solution_json(r).dump(2) + "\n";
            write_text(dir / "solution.json", text);
            std::cout << text;
        });

    if (*probe_cmd)
        return guarded([&] {
            auto cfg = load(probe_opts);
            auto r = run_probe(cfg);
            auto sol = solution_json(r).dump(2) + "\n";
            auto csv = gap_curve_csv(r);
            auto rep = report_json(r);
            auto dir = out_dir(probe_opts, cfg);
            write_text(dir / "solution.json", sol);
            write_text(dir / "gap_curve.csv", csv);
            write_text(dir / "report.json", rep.dump(2) + "\n");
            for (const auto& pr : rep["probes"])
                std::cout << cfg.name << " " << pr["metric"].get<std::string>() << ": "
                          << pr["verdict"].get<std::string>() << "\n";
        });

    if (*check_cmd)
        return guarded([&] {
            auto cfg = load(check_opts);
            MarketModel model(cfg.x, cfg.gamma);
            auto text = assumptions_json(check_assumptions(model, cfg.problem.p)).dump(2) + "\n";
            if (!check_opts.out_dir.empty())
                write_text(fs::path(check_opts.out_dir) / "assumptions.json", text);
            std::cout << text;
        });

    return guarded([&] {
        auto cmp_configs = cmp_flagged;
        cmp_configs.insert(cmp_configs.end(), cmp_positional.begin(), cmp_positional.end());
        if (cmp_configs.size() != 2)
            throw ValidationError("compare needs exactly two configs");
        Common a = cmp_opts, b = cmp_opts;
        a.config = cmp_configs[0];
        b.config = cmp_configs[1];
        auto ca = load(a), cb = load(b);
        check_comparable(ca, cb);
        auto ra = run_probe(ca);
        auto rb = run_probe(cb);
        auto cmp = compare(ra, rb);
        fs::path dir = cmp_opts.out_dir.empty() ? fs::path("out") / ("compare_" + ca.name + "_" + cb.name)
                                                : fs::path(cmp_opts.out_dir);
        write_text(dir / "compare.csv", cmp.summary_csv);
        write_text(dir / "compare_gaps.csv", cmp.gaps_csv);
        std::cout << cmp.summary_csv << "\n" << cmp.gaps_csv;
    });
}
