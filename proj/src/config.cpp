#include "kuramoto/config.hpp"

#include <array>
#include <fstream>
#include <set>

#include "kuramoto/errors.hpp"

namespace kuramoto {

namespace {

constexpr std::array<std::string_view, 6> experiment_names{"figure1", "razor_edge", "pattern_search",
                                                           "basin",   "certify",    "region_scan"};

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where)
{
    for (const auto& [key, value] : j.items())
        if (!allowed.contains(key)) throw ParseError(where + ": unknown key '" + key + "'");
}

std::size_t get_count(const nlohmann::json& v, const std::string& key)
{
    if (!v.is_number_unsigned()) throw ParseError("config: '" + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

double get_number(const nlohmann::json& v, const std::string& key)
{
    if (!v.is_number()) throw ParseError("config: '" + key + "' must be a number");
    return v.get<double>();
}

std::string get_string(const nlohmann::json& v, const std::string& key)
{
    if (!v.is_string()) throw ParseError("config: '" + key + "' must be a string");
    return v.get<std::string>();
}

Range get_range(const nlohmann::json& v, const std::string& key)
{
    if (v.is_number_unsigned()) {
        const auto x = v.get<std::size_t>();
        return {x, x};
    }
    if (!v.is_array() || v.size() != 2)
        throw ParseError("config: '" + key + "' must be an integer or a [lo, hi] pair");
    const auto lo = get_count(v[0], key);
    const auto hi = get_count(v[1], key);
    if (lo > hi) throw ParseError("config: '" + key + "' has lo > hi");
    return {lo, hi};
}

} // namespace

std::string_view to_string(Experiment e) noexcept
{
    return experiment_names[static_cast<std::size_t>(e)];
}

Experiment parse_experiment(std::string_view name)
{
    std::string canon(name);
    for (auto& ch : canon)
        if (ch == '-') ch = '_';
    for (std::size_t i = 0; i < experiment_names.size(); ++i)
        if (canon == experiment_names[i]) return static_cast<Experiment>(i);
    throw ParseError("unknown experiment '" + std::string(name) + "'");
}

ExperimentConfig parse_config(const nlohmann::json& j)
{
    if (!j.is_object()) throw ParseError("config: top level must be an object");
    reject_unknown(j,
                   {"experiment", "n_range", "trials", "seed", "tolerances", "output_path", "graph", "state", "m_range",
                    "mu_tilde", "grid_step", "budget", "degree_budget", "csv_path"},
                   "config");
    ExperimentConfig c;
    if (j.contains("experiment")) c.experiment = parse_experiment(get_string(j["experiment"], "experiment"));
    if (j.contains("n_range")) c.n_range = get_range(j["n_range"], "n_range");
    if (j.contains("trials")) c.trials = get_count(j["trials"], "trials");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ParseError("config: 'seed' must be a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("output_path")) c.output_path = get_string(j["output_path"], "output_path");
    if (j.contains("graph")) c.graph = get_string(j["graph"], "graph");
    if (j.contains("state")) c.state = get_string(j["state"], "state");
    if (j.contains("m_range")) c.m_range = get_range(j["m_range"], "m_range");
    if (j.contains("mu_tilde")) c.mu_tilde = get_number(j["mu_tilde"], "mu_tilde");
    if (j.contains("grid_step")) c.grid_step = get_number(j["grid_step"], "grid_step");
    if (j.contains("budget")) c.budget = get_count(j["budget"], "budget");
    if (j.contains("degree_budget")) c.degree_budget = get_count(j["degree_budget"], "degree_budget");
    if (j.contains("csv_path")) c.csv_path = get_string(j["csv_path"], "csv_path");

    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (!t.is_object()) throw ParseError("config: 'tolerances' must be an object");
        reject_unknown(t, {"refine_tol", "zero_tol", "stop_residual", "sync_rho1", "dt", "t_end"}, "config.tolerances");
        auto& out = c.tolerances;
        if (t.contains("refine_tol")) out.refine_tol = get_number(t["refine_tol"], "refine_tol");
        if (t.contains("zero_tol")) out.zero_tol = get_number(t["zero_tol"], "zero_tol");
        if (t.contains("stop_residual")) out.stop_residual = get_number(t["stop_residual"], "stop_residual");
        if (t.contains("sync_rho1")) out.sync_rho1 = get_number(t["sync_rho1"], "sync_rho1");
        if (t.contains("dt")) out.dt = get_number(t["dt"], "dt");
        if (t.contains("t_end")) out.t_end = get_number(t["t_end"], "t_end");
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("config '" + path + "': " + e.what());
    }
    return parse_config(j);
}

nlohmann::json to_json(const ExperimentConfig& c)
{
    nlohmann::json j = nlohmann::json::object();
    auto put = [&](const char* key, const auto& opt) {
        if (opt) j[key] = *opt;
    };
    if (c.experiment) j["experiment"] = std::string(to_string(*c.experiment));
    if (c.n_range) j["n_range"] = {c.n_range->first, c.n_range->second};
    if (c.m_range) j["m_range"] = {c.m_range->first, c.m_range->second};
    put("trials", c.trials);
    put("seed", c.seed);
    put("output_path", c.output_path);
    put("graph", c.graph);
    put("state", c.state);
    put("mu_tilde", c.mu_tilde);
    put("grid_step", c.grid_step);
    put("budget", c.budget);
    put("degree_budget", c.degree_budget);
    put("csv_path", c.csv_path);
    nlohmann::json t = nlohmann::json::object();
    auto put_t = [&](const char* key, const std::optional<double>& v) {
        if (v) t[key] = *v;
    };
    put_t("refine_tol", c.tolerances.refine_tol);
    put_t("zero_tol", c.tolerances.zero_tol);
    put_t("stop_residual", c.tolerances.stop_residual);
    put_t("sync_rho1", c.tolerances.sync_rho1);
    put_t("dt", c.tolerances.dt);
    put_t("t_end", c.tolerances.t_end);
    if (!t.empty()) j["tolerances"] = std::move(t);
    return j;
}

} // namespace kuramoto
