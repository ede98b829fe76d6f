// kuramoto-certify: experiment driver.
//
//   kuramoto-certify <figure1|razor-edge|pattern-search|basin|certify|region-scan> [flags]
//
// Exit codes: 0 success, 2 parse/config error, 3 numeric failure,
// 4 consistency-guard violation.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "kuramoto/config.hpp"
#include "kuramoto/dynamics.hpp"
#include "kuramoto/errors.hpp"
#include "kuramoto/feasibility.hpp"
#include "kuramoto/harness.hpp"

namespace {

using namespace kuramoto;

constexpr int exit_ok = 0;
constexpr int exit_parse = 2;
constexpr int exit_numeric = 3;
constexpr int exit_guard = 4;

struct Flags {
    std::string config;
    std::vector<std::size_t> n;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::string out;

    std::string graph;
    std::string state;
    std::optional<std::size_t> m_min, m_max;
    std::optional<double> mu_tilde, grid_step;
    std::optional<std::size_t> budget, degree_budget;
    std::string csv;
    std::optional<double> dt, t_end;
    bool exhaustive = false;
    bool outcomes = false;
};

void add_common(CLI::App* sub, Flags& f)
{
    sub->add_option("--config", f.config, "JSON config file; flags override its values");
    sub->add_option("--n", f.n, "node count, or two values lo hi for a range")->expected(1, 2);
    sub->add_option("--trials", f.trials, "random initial conditions per graph");
    sub->add_option("--seed", f.seed, "64-bit seed for every random draw");
    sub->add_option("--out", f.out, "output file (default: stdout)");
}

ExperimentConfig merged(const Flags& f, Experiment which)
{
    ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
    if (c.experiment && *c.experiment != which)
        throw ParseError("config is for '" + std::string(to_string(*c.experiment)) + "', not '" +
                         std::string(to_string(which)) + "'");
    c.experiment = which;
    if (f.n.size() == 1) c.n_range = Range{f.n[0], f.n[0]};
    if (f.n.size() == 2) {
        if (f.n[0] > f.n[1]) throw ParseError("--n: lo > hi");
        c.n_range = Range{f.n[0], f.n[1]};
    }
    if (f.trials) c.trials = f.trials;
    if (f.seed) c.seed = f.seed;
    if (!f.out.empty()) c.output_path = f.out;
    if (!f.graph.empty()) c.graph = f.graph;
    if (!f.state.empty()) c.state = f.state;
    if (f.m_min || f.m_max) {
        const auto base = c.m_range.value_or(Range{1, 8});
        c.m_range = Range{f.m_min.value_or(base.first), f.m_max.value_or(base.second)};
        if (c.m_range->first > c.m_range->second) throw ParseError("--m-min exceeds --m-max");
    }
    if (f.mu_tilde) c.mu_tilde = f.mu_tilde;
    if (f.grid_step) c.grid_step = f.grid_step;
    if (f.budget) c.budget = f.budget;
    if (f.degree_budget) c.degree_budget = f.degree_budget;
    if (!f.csv.empty()) c.csv_path = f.csv;
    if (f.dt) c.tolerances.dt = f.dt;
    if (f.t_end) c.tolerances.t_end = f.t_end;
    return c;
}

void emit(const ExperimentConfig& c, const std::function<void(std::ostream&)>& write)
{
    if (!c.output_path || c.output_path->empty() || *c.output_path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(*c.output_path);
    if (!out) throw ParseError("cannot open output file '" + *c.output_path + "'");
    write(out);
    if (!out) throw ParseError("write to '" + *c.output_path + "' failed");
}

void emit_json(const ExperimentConfig& c, const nlohmann::json& j)
{
    emit(c, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

BasinOptions basin_options(const ExperimentConfig& c)
{
    BasinOptions o;
    if (c.tolerances.dt) o.dt = *c.tolerances.dt;
    if (c.tolerances.t_end) o.t_end = *c.tolerances.t_end;
    if (c.tolerances.stop_residual) o.stop_residual = *c.tolerances.stop_residual;
    if (c.tolerances.sync_rho1) o.sync_rho1 = *c.tolerances.sync_rho1;
    return o;
}

PatternSearchOptions search_options(const ExperimentConfig& c, std::size_t default_degree_budget)
{
    PatternSearchOptions o;
    o.budget = c.budget.value_or(0);
    o.degree_budget = c.degree_budget.value_or(default_degree_budget);
    return o;
}

Graph resolve_graph(const std::string& spec)
{
    // a bare path is a graph file
    if (spec.find(':') == std::string::npos) return load_graph(spec);
    return graph_from_descriptor(spec);
}

int run_figure1_cmd(const ExperimentConfig& c)
{
    const auto range = c.n_range.value_or(Range{5, 40});
    const auto rows = run_figure1(range.first, range.second, search_options(c, 2000));
    emit(c, [&](std::ostream& os) { write_figure1_csv(os, rows); });
    for (const auto& r : rows)
        if (r.guard_violated) {
            std::cerr << "consistency guard: stable pattern above the sufficient bound at n = " << r.n << '\n';
            return exit_guard;
        }
    return exit_ok;
}

int run_razor_cmd(const ExperimentConfig& c)
{
    const auto m = c.m_range.value_or(Range{1, 8});
    const auto rows = run_razor_edge(m.first, m.second, c.trials.value_or(20), c.seed.value_or(0), basin_options(c));
    emit_json(c, to_json(rows));
    return exit_ok;
}

int run_search_cmd(const ExperimentConfig& c, bool exhaustive)
{
    if (!c.n_range || c.n_range->first != c.n_range->second) throw ParseError("pattern-search needs a single --n");
    auto opts = search_options(c, 0);
    opts.exhaustive_spectrum = exhaustive;
    const auto result = run_pattern_search(c.n_range->first, opts);
    emit_json(c, to_json(result));
    if (result.guard_violated) {
        std::cerr << "consistency guard: stable pattern above the sufficient bound\n";
        return exit_guard;
    }
    return exit_ok;
}

int run_basin_cmd(const ExperimentConfig& c, bool outcomes)
{
    if (!c.graph) throw ParseError("basin needs --graph");
    const auto g = resolve_graph(*c.graph);
    const auto est = run_basin(g, c.trials.value_or(100), c.seed.value_or(0), basin_options(c), *c.graph);
    emit_json(c, to_json(est, outcomes));
    return exit_ok;
}

int run_certify_cmd(const ExperimentConfig& c)
{
    if (!c.graph || !c.state) throw ParseError("certify needs --graph and --state");
    const auto g = resolve_graph(*c.graph);
    const auto s = load_state(*c.state);
    if (s.size() != g.size())
        throw ParseError("state has " + std::to_string(s.size()) + " phases, graph has " + std::to_string(g.size()) +
                         " nodes");
    CertifyOptions opts;
    if (c.tolerances.refine_tol) opts.refine_tol = *c.tolerances.refine_tol;
    opts.zero_tol = c.tolerances.zero_tol;
    const auto outcome = run_certify(g, s, opts);
    emit_json(c, to_json(outcome));
    return outcome.consistent ? exit_ok : exit_guard;
}

int run_region_cmd(const ExperimentConfig& c)
{
    const auto region = feasibility_scan(c.mu_tilde.value_or(0.7495), c.grid_step.value_or(1e-3));
    nlohmann::json j = to_json(region);
    j.erase("runs");
    j["thresholds"] = region.components.empty() ? nlohmann::json(nullptr) : to_json(refine_thresholds(region));
    emit_json(c, j);
    if (c.csv_path) {
        std::ofstream csv(*c.csv_path);
        if (!csv) throw ParseError("cannot open csv file '" + *c.csv_path + "'");
        csv.precision(std::numeric_limits<double>::max_digits10);
        write_region_csv(csv, region);
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Synchronisation certificates and experiments for identical Kuramoto oscillators"};
    app.require_subcommand(1);

    Flags f;
    auto* figure1 = app.add_subcommand("figure1", "sufficient bound, densest stable pattern and twin(C4) per n (CSV)");
    auto* razor = app.add_subcommand("razor-edge", "twisted state on twin(C4, m): residual, spectrum, basin (JSON)");
    auto* search = app.add_subcommand("pattern-search", "densest circulant graph with a stable twisted state (JSON)");
    auto* basin = app.add_subcommand("basin", "Monte Carlo synchrony fraction (JSON)");
    auto* cert = app.add_subcommand("certify", "refine a state and evaluate every certificate (JSON)");
    auto* region = app.add_subcommand("region-scan", "feasible (rho1, |rho2|) region and thresholds (JSON, CSV)");

    for (auto* sub : {figure1, razor, search, basin, cert, region}) add_common(sub, f);

    for (auto* sub : {figure1, search}) {
        sub->add_option("--budget", f.budget, "offset sets to examine in total (0: no limit)");
        sub->add_option("--degree-budget", f.degree_budget, "offset sets to examine per degree (0: no limit)");
    }
    search->add_flag("--exhaustive", f.exhaustive, "classify every twisted state by the dense spectrum");

    razor->add_option("--m-min", f.m_min, "first twin factor (default 1)");
    razor->add_option("--m-max", f.m_max, "last twin factor (default 8)");

    for (auto* sub : {razor, basin}) {
        sub->add_option("--dt", f.dt, "RK4 step");
        sub->add_option("--t-end", f.t_end, "integration horizon");
    }
    basin->add_option("--graph", f.graph, "graph descriptor (complete:N, cycle:N, circulant:N:s1,s2, twin-c4:M) or file");
    basin->add_flag("--outcomes", f.outcomes, "include per-trial outcomes");

    cert->add_option("--graph", f.graph, "graph file or descriptor");
    cert->add_option("--state", f.state, "state file: whitespace separated phases");

    region->add_option("--mu-tilde", f.mu_tilde, "self-loop connectivity (default 0.7495)");
    region->add_option("--grid-step", f.grid_step, "grid spacing (default 1e-3)");
    region->add_option("--csv", f.csv, "also write the point cloud here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_parse;
    }

    try {
        if (figure1->parsed()) return run_figure1_cmd(merged(f, Experiment::figure1));
        if (razor->parsed()) return run_razor_cmd(merged(f, Experiment::razor_edge));
        if (search->parsed()) return run_search_cmd(merged(f, Experiment::pattern_search), f.exhaustive);
        if (basin->parsed()) return run_basin_cmd(merged(f, Experiment::basin), f.outcomes);
        if (cert->parsed()) return run_certify_cmd(merged(f, Experiment::certify));
        if (region->parsed()) return run_region_cmd(merged(f, Experiment::region_scan));
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_parse;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return exit_numeric;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_parse;
    }
    return exit_parse;
}
