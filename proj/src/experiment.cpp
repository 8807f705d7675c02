#include "robopt/experiment.hpp"

#include "robopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace robopt {

using nlohmann::json;

std::string fmt17(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

json num(double v)
{
    if (!std::isfinite(v))
        return fmt17(v);
    return v;
}

json opt_num(const std::optional<double>& v)
{
    return v ? num(*v) : json(nullptr);
}

[[noreturn]] void invalid(const std::string& what)
{
    throw ValidationError("config: " + what);
}

const json& need(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        invalid(where + " is missing '" + key + "'");
    return j.at(key);
}

double get_num(const json& j, const char* key, const std::string& where)
{
    const auto& v = need(j, key, where);
    if (!v.is_number())
        invalid(where + "." + key + " must be a number");
    return v.get<double>();
}

double get_num_or(const json& j, const char* key, double dflt, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        return dflt;
    return get_num(j, key, where);
}

std::string get_str(const json& j, const char* key, const std::string& where)
{
    const auto& v = need(j, key, where);
    if (!v.is_string())
        invalid(where + "." + key + " must be a string");
    return v.get<std::string>();
}

// library constructors report bad parameters as DomainError; in a config
// that is a validation failure
template <class F>
auto validating(const std::string& where, F&& f)
{
    try {
        return f();
    } catch (const DomainError& e) {
        invalid(where + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        invalid(where + ": " + e.what());
    }
}

} // namespace

ScalarDistribution parse_distribution(const json& j)
{
    const std::string w = "model.x";
    auto fam = get_str(j, "family", w);
    return validating(w, [&] {
        if (fam == "uniform")
            return ScalarDistribution::uniform(get_num(j, "a", w), get_num(j, "b", w));
        if (fam == "exponential")
            return ScalarDistribution::exponential(get_num_or(j, "rate", 1.0, w));
        if (fam == "lognormal")
            return ScalarDistribution::lognormal(get_num(j, "mu", w), get_num(j, "sigma", w));
        if (fam == "pareto")
            return ScalarDistribution::pareto(get_num(j, "alpha", w), get_num_or(j, "scale", 1.0, w));
        if (fam == "empirical") {
            const auto& v = need(j, "values", w);
            if (!v.is_array())
                invalid(w + ".values must be an array");
            std::vector<double> weights;
            if (j.contains("weights"))
                weights = j.at("weights").get<std::vector<double>>();
            return ScalarDistribution::empirical(v.get<std::vector<double>>(), weights);
        }
        invalid(w + ".family '" + fam + "' is not one of uniform, exponential, lognormal, pareto, empirical");
    });
}

PricingDensity parse_gamma(const json& j)
{
    const std::string w = "model.gamma";
    auto kind = get_str(j, "kind", w);
    return validating(w, [&] {
        if (kind == "constant")
            return PricingDensity::constant(get_num_or(j, "a", 1.0, w));
        if (kind == "linear")
            return PricingDensity::linear(get_num(j, "intercept", w), get_num(j, "slope", w));
        if (kind == "power")
            return PricingDensity::power(get_num(j, "exponent", w), get_num_or(j, "coeff", 1.0, w));
        invalid(w + ".kind '" + kind + "' is not one of constant, linear, power");
    });
}

ExperimentConfig parse_config(const json& j)
{
    if (!j.is_object())
        invalid("top level must be an object");
    ExperimentConfig c;
    const auto& sv = need(j, "schema_version", "config");
    if (!sv.is_number_integer() || sv.get<int>() != kSchemaVersion)
        invalid("schema_version must be " + std::to_string(kSchemaVersion));
    c.name = j.value("name", std::string("experiment"));

    c.model_block = need(j, "model", "config");
    c.x = parse_distribution(need(c.model_block, "x", "model"));
    c.gamma = parse_gamma(c.model_block.value("gamma", json{{"kind", "constant"}}));

    c.problem_block = need(j, "problem", "config");
    const auto& pb = c.problem_block;
    c.problem = validating("problem", [&] {
        ProblemSpec s{RiskLevel(get_num(pb, "p", "problem"))};
        s.constraint = constraint_from_string(get_str(pb, "constraint", "problem"));
        s.x0 = get_num(pb, "x0", "problem");
        if (s.constraint == Constraint::Bounded)
            s.m = get_num(pb, "m", "problem");
        return s;
    });
    if (pb.contains("dro_epsilon")) {
        double e = get_num(pb, "dro_epsilon", "problem");
        if (!(e > 0))
            invalid("problem.dro_epsilon must be positive");
        c.dro_epsilon = e;
    }

    c.rho = validating("rho", [&] { return rho_from_string(get_str(j, "rho", "config")); });
    if (c.dro_epsilon && !(c.rho == Rho::VaR && c.problem.constraint == Constraint::Bounded))
        invalid("problem.dro_epsilon applies to bounded VaR problems only");

    const auto& pt = need(j, "perturb", "config");
    c.perturb.kind = get_str(pt, "kind", "perturb");
    static const char* kinds[] = {"shift", "scale", "lemma_a2", "tail_spike"};
    if (std::find_if(std::begin(kinds), std::end(kinds), [&](const char* k) { return c.perturb.kind == k; }) ==
        std::end(kinds))
        invalid("perturb.kind '" + c.perturb.kind + "' is not one of shift, scale, lemma_a2, tail_spike");
    c.perturb.params = pt.value("params", json::object());
    if (!c.perturb.params.is_object())
        invalid("perturb.params must be an object");
    const auto& grid = need(pt, "eps_grid", "perturb");
    if (!grid.is_array() || grid.empty())
        invalid("perturb.eps_grid must be a nonempty array");
    for (const auto& e : grid) {
        if (!e.is_number())
            invalid("perturb.eps_grid entries must be numbers");
        c.perturb.eps_grid.push_back(e.get<double>());
    }
    for (std::size_t i = 0; i < c.perturb.eps_grid.size(); ++i) {
        if (!(c.perturb.eps_grid[i] > 0))
            invalid("perturb.eps_grid entries must be positive");
        if (i > 0 && !(c.perturb.eps_grid[i] < c.perturb.eps_grid[i - 1]))
            invalid("perturb.eps_grid must be strictly decreasing");
    }

    const auto& mj = need(j, "metric", "config");
    std::vector<std::string> names;
    if (mj.is_string())
        names.push_back(mj.get<std::string>());
    else if (mj.is_array() && !mj.empty())
        for (const auto& m : mj) {
            if (!m.is_string())
                invalid("metric entries must be strings");
            names.push_back(m.get<std::string>());
        }
    else
        invalid("metric must be a string or a nonempty array of strings");
    for (const auto& n : names)
        c.metrics.push_back(validating("metric", [&] { return MetricKind::parse(n); }));

    if (j.contains("n_samples")) {
        const auto& ns = j.at("n_samples");
        if (!ns.is_number_integer() || ns.get<std::int64_t>() < 0)
            invalid("n_samples must be a nonnegative integer");
        c.n_samples = ns.get<std::size_t>();
    }
    const auto& seed = need(j, "seed", "config");
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0))
        invalid("seed must be a nonnegative integer");
    c.seed = seed.get<std::uint64_t>();

    if (j.contains("output")) {
        const auto& o = j.at("output");
        if (!o.is_object() || (o.contains("dir") && !o.at("dir").is_string()))
            invalid("output.dir must be a string");
        c.out_dir = o.value("dir", std::string());
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        invalid("cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        invalid(path.string() + ": " + e.what());
    }
    try {
        return parse_config(j);
    } catch (const json::exception& e) {
        invalid(path.string() + ": " + e.what());
    }
}

PerturbationFamily make_family(const ExperimentConfig& cfg, const MarketModel& model, const SolutionFunction& g)
{
    const auto& k = cfg.perturb.kind;
    const auto& pr = cfg.perturb.params;
    if (k == "shift")
        return PerturbationFamily::shift();
    if (k == "scale")
        return PerturbationFamily::scale();
    if (k == "tail_spike")
        return PerturbationFamily::tail_spike(get_num_or(pr, "mass_coeff", 0.05, "perturb.params"),
                                              get_num_or(pr, "height_coeff", 1.0, "perturb.params"),
                                              get_num_or(pr, "height_power", 2.0, "perturb.params"));
    bool qc = pr.value("quantile_coupled", false);
    double p = cfg.problem.p;
    if (pr.contains("a")) {
        // B = {x > a}
        double a = get_num(pr, "a", "perturb.params");
        return PerturbationFamily::lemma_a2(model, IntervalSet::above(a), p, qc);
    }
    return PerturbationFamily::lemma_a2_for(model, g, p, qc);
}

ExperimentResult run_solve(const ExperimentConfig& cfg)
{
    MarketModel model(cfg.x, cfg.gamma);
    auto assumptions = check_assumptions(model, cfg.problem.p);
    auto g = solve(model, cfg.problem, cfg.rho, cfg.dro_epsilon);
    return ExperimentResult{cfg, std::move(model), std::move(assumptions), std::move(g), {}};
}

ExperimentResult run_probe(const ExperimentConfig& cfg)
{
    auto r = run_solve(cfg);
    auto family = make_family(cfg, r.model, r.solution);
    ProbeOptions opts;
    opts.n_samples = cfg.n_samples;
    opts.seed = cfg.seed;
    opts.resolve = ResolveContext{cfg.problem, cfg.dro_epsilon};
    for (const auto& m : cfg.metrics)
        r.reports.push_back(
            probe(r.model, r.solution, cfg.rho, cfg.problem.p, family, m, cfg.perturb.eps_grid, opts));
    return r;
}

json assumptions_json(const AssumptionReport& r)
{
    json a = json::array();
    for (const auto& c : r.checks)
        a.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"diagnostic", c.diagnostic}});
    return a;
}

namespace {

json problem_json(const ExperimentConfig& c)
{
    json p{{"constraint", to_string(c.problem.constraint)},
           {"p", num(c.problem.p)},
           {"x0", num(c.problem.x0)},
           {"rho", to_string(c.rho)}};
    if (c.problem.constraint == Constraint::Bounded)
        p["m"] = num(c.problem.m);
    if (c.dro_epsilon)
        p["dro_epsilon"] = num(*c.dro_epsilon);
    return p;
}

double max_jump(const SolutionFunction& g)
{
    double j = 0;
    for (const auto& jp : g.jumps())
        j = std::max(j, std::fabs(jp.size));
    return j;
}

json meta_json(const SolutionFunction& g)
{
    const auto& m = g.meta();
    json s{{"problem", m.problem},
           {"form", m.form},
           {"q", opt_num(m.q)},
           {"q_prime", opt_num(m.q_prime)},
           {"c", opt_num(m.c)},
           {"r", opt_num(m.r)},
           {"lambda", opt_num(m.lambda)},
           {"threshold", opt_num(m.threshold)},
           {"epsilon", opt_num(m.epsilon)},
           {"multiple_roots", m.multiple_roots},
           {"unique", m.unique},
           {"objective", num(m.objective)},
           {"budget", num(m.budget)},
           {"continuity", to_string(g.continuity())},
           {"notes", m.notes}};
    json roots = json::array();
    for (double q : m.q_roots)
        roots.push_back(num(q));
    s["q_roots"] = roots;
    json jumps = json::array();
    for (const auto& jp : g.jumps())
        jumps.push_back({{"location", num(jp.location)}, {"size", num(jp.size)}});
    s["jumps"] = jumps;
    json segs = json::array();
    for (const auto& sg : g.segments())
        segs.push_back({{"lo", num(sg.lo)}, {"hi", num(sg.hi)}, {"intercept", num(sg.intercept)},
                        {"slope", num(sg.slope)}});
    s["segments"] = segs;
    return s;
}

} // namespace

json solution_json(const ExperimentResult& r)
{
    return json{{"schema_version", kSchemaVersion},
                {"name", r.config.name},
                {"problem", problem_json(r.config)},
                {"model", {{"x", r.model.x().describe()}, {"gamma", r.model.gamma().describe()},
                           {"warning", r.model.warning()}}},
                {"assumptions", assumptions_json(r.assumptions)},
                {"solution", meta_json(r.solution)}};
}

json report_json(const ExperimentResult& r)
{
    json probes = json::array();
    for (const auto& rep : r.reports) {
        json pts = json::array();
        for (const auto& pt : rep.points)
            pts.push_back({{"eps", num(pt.eps)},
                           {"distance", num(pt.distance)},
                           {"distance_exact", pt.distance_exact},
                           {"measured_distance", opt_num(pt.measured_distance)},
                           {"rho_at_Z", num(pt.rho_at_z)},
                           {"rho_at_X", num(pt.rho_at_x)},
                           {"solvency_gap", num(pt.gap)},
                           {"method", pt.method},
                           {"mc_rho_at_Z", opt_num(pt.mc_rho_at_z)},
                           {"mc_stderr", num(pt.mc_stderr)},
                           {"optimality_gap", opt_num(pt.optimality_gap)},
                           {"optimality_shift", opt_num(pt.optimality_shift)}});
        auto guarantee = check_continuity_criterion(r.solution, RhoContinuity::of(rep.rho), rep.metric);
        probes.push_back({{"metric", rep.metric.name()},
                          {"family", rep.family},
                          {"verdict", to_string(rep.verdict)},
                          {"limit_gap_estimate", num(rep.limit_gap_estimate)},
                          {"threshold", num(rep.threshold)},
                          {"reason", rep.verdict_reason},
                          {"continuity_criterion", to_string(guarantee)},
                          {"notes", rep.notes},
                          {"points", pts}});
    }
    return json{{"schema_version", kSchemaVersion},
                {"name", r.config.name},
                {"rho", to_string(r.config.rho)},
                {"seed", r.config.seed},
                {"n_samples", r.config.n_samples},
                {"objective", num(r.solution.meta().objective)},
                {"jump_size", num(max_jump(r.solution))},
                {"probes", probes}};
}

std::string gap_curve_csv(const ExperimentResult& r)
{
    std::string out = "eps,metric,rho_at_Z,rho_at_X,solvency_gap,mc_stderr\n";
    for (const auto& rep : r.reports)
        for (const auto& pt : rep.points)
            out += fmt17(pt.distance) + "," + rep.metric.name() + "," + fmt17(pt.rho_at_z) + "," +
                   fmt17(pt.rho_at_x) + "," + fmt17(pt.gap) + "," + fmt17(pt.mc_stderr) + "\n";
    return out;
}

void check_comparable(const ExperimentConfig& a, const ExperimentConfig& b)
{
    if (a.model_block != b.model_block)
        invalid("compare: the two configs describe different models");
    if (a.problem_block != b.problem_block)
        invalid("compare: the two configs describe different problems");
}

Comparison compare(const ExperimentResult& a, const ExperimentResult& b)
{
    check_comparable(a.config, b.config);
    Comparison c;
    auto row = [&](const std::string& k, const std::string& va, const std::string& vb) {
        c.summary_csv += k + "," + va + "," + vb + "\n";
    };
    c.summary_csv = "field," + a.config.name + "," + b.config.name + "\n";
    row("rho", to_string(a.config.rho), to_string(b.config.rho));
    row("objective", fmt17(a.solution.meta().objective), fmt17(b.solution.meta().objective));
    row("jump_size", fmt17(max_jump(a.solution)), fmt17(max_jump(b.solution)));

    std::map<std::string, std::pair<const RobustnessReport*, const RobustnessReport*>> by_metric;
    std::vector<std::string> order;
    for (const auto& rep : a.reports) {
        if (!by_metric.count(rep.metric.name()))
            order.push_back(rep.metric.name());
        by_metric[rep.metric.name()].first = &rep;
    }
    for (const auto& rep : b.reports) {
        if (!by_metric.count(rep.metric.name()))
            order.push_back(rep.metric.name());
        by_metric[rep.metric.name()].second = &rep;
    }
    for (const auto& name : order) {
        auto [ra, rb] = by_metric[name];
        row("limit_gap[" + name + "]", ra ? fmt17(ra->limit_gap_estimate) : "", rb ? fmt17(rb->limit_gap_estimate) : "");
        row("verdict[" + name + "]", ra ? to_string(ra->verdict) : "", rb ? to_string(rb->verdict) : "");
    }

    // gap table: one row per (metric, eps), eps descending
    struct Row {
        std::string metric;
        double eps;
        std::optional<double> ga, gb;
    };
    std::vector<Row> rows;
    auto add = [&](const RobustnessReport& rep, bool first) {
        for (const auto& pt : rep.points) {
            auto it = std::find_if(rows.begin(), rows.end(), [&](const Row& r) {
                return r.metric == rep.metric.name() && r.eps == pt.distance;
            });
            if (it == rows.end()) {
                rows.push_back({rep.metric.name(), pt.distance, {}, {}});
                it = rows.end() - 1;
            }
            (first ? it->ga : it->gb) = pt.gap;
        }
    };
    for (const auto& rep : a.reports)
        add(rep, true);
    for (const auto& rep : b.reports)
        add(rep, false);
    std::stable_sort(rows.begin(), rows.end(), [&](const Row& x, const Row& y) {
        if (x.metric != y.metric) {
            auto ix = std::find(order.begin(), order.end(), x.metric);
            auto iy = std::find(order.begin(), order.end(), y.metric);
            return ix < iy;
        }
        return x.eps > y.eps;
    });
    c.gaps_csv = "eps,metric,gap_" + a.config.name + ",gap_" + b.config.name + "\n";
    for (const auto& r : rows)
        c.gaps_csv += fmt17(r.eps) + "," + r.metric + "," + (r.ga ? fmt17(*r.ga) : "") + "," +
                      (r.gb ? fmt17(*r.gb) : "") + "\n";
    return c;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
}

} // namespace robopt
