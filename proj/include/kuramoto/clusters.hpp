#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include <json.hpp>

#include "kuramoto/phase_state.hpp"

namespace kuramoto {

/// Max distance (radians) from a cluster centre for membership.
inline constexpr double cluster_spread_threshold = 0.146;
/// Step of the scan over the base phase phi in [0, pi/2).
inline constexpr double cluster_phi_step = 1e-3;
inline constexpr double cluster_pair_fraction = 0.249;
inline constexpr double cluster_rogue_fraction = 1.0 / 250.0;

/// Decomposition of a state into four clusters centred at phi + k pi/2.
struct ClusterReport {
    double phi = 0.0;
    std::array<std::size_t, 4> sizes{};
    std::array<double, 4> spreads{}; ///< max |theta - centre| per cluster, 0 when empty
    std::size_t rogue_count = 0;

    /// rho_1 and |rho_2| small enough (and mu_tilde, when given, large enough)
    /// for the near-incoherent pattern picture to apply.
    bool regime_applies = false;
    /// Only set when regime_applies: one antipodal pair of clusters each holds
    /// at least 0.249 n oscillators and at most n/250 are rogue.
    std::optional<bool> regime_bounds_hold;

    [[nodiscard]] double centre(std::size_t k) const;
};

[[nodiscard]] ClusterReport cluster_analysis(const PhaseState& s, std::optional<double> mu_tilde = {});

[[nodiscard]] nlohmann::json to_json(const ClusterReport& r);

} // namespace kuramoto
