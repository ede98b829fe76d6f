#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <json.hpp>

namespace kuramoto {

enum class Experiment { figure1, razor_edge, pattern_search, basin, certify, region_scan };

[[nodiscard]] std::string_view to_string(Experiment e) noexcept;
/// Accepts both `razor_edge` and `razor-edge` spellings. Throws ParseError.
[[nodiscard]] Experiment parse_experiment(std::string_view name);

/// Overrides of library defaults; unset fields keep the default.
struct Tolerances {
    std::optional<double> refine_tol;
    std::optional<double> zero_tol;
    std::optional<double> stop_residual;
    std::optional<double> sync_rho1;
    std::optional<double> dt;
    std::optional<double> t_end;
};

using Range = std::pair<std::size_t, std::size_t>;

/// Everything a run can be configured with. Every field is optional so a
/// file and the command line can be layered; the tool fills in defaults.
struct ExperimentConfig {
    std::optional<Experiment> experiment;
    std::optional<Range> n_range;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    Tolerances tolerances;
    std::optional<std::string> output_path;

    std::optional<std::string> graph; ///< graph descriptor, see graph_from_descriptor
    std::optional<std::string> state; ///< state file path
    std::optional<Range> m_range;
    std::optional<double> mu_tilde;
    std::optional<double> grid_step;
    std::optional<std::size_t> budget;
    std::optional<std::size_t> degree_budget;
    std::optional<std::string> csv_path;
};

/// Keys: experiment, n_range ([lo, hi] or a single integer), trials, seed,
/// tolerances {refine_tol, zero_tol, stop_residual, sync_rho1, dt, t_end},
/// output_path, graph, state, m_range, mu_tilde, grid_step, budget,
/// degree_budget, csv_path. Unknown keys and wrong types throw ParseError.
[[nodiscard]] ExperimentConfig parse_config(const nlohmann::json& j);
[[nodiscard]] ExperimentConfig load_config(const std::string& path);

[[nodiscard]] nlohmann::json to_json(const ExperimentConfig& c);

} // namespace kuramoto
