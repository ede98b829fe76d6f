#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "kuramoto/graph.hpp"
#include "kuramoto/phase_state.hpp"

namespace kuramoto {

enum class Stability { stable, unstable, marginal };

[[nodiscard]] std::string_view to_string(Stability s) noexcept;

/// Eigenvalues of the Jacobian at an equilibrium plus the linear-stability call.
///
/// The rotation mode always contributes one zero eigenvalue. A second zero
/// with everything else non-positive is reported as Marginal: linearisation
/// alone cannot decide such states.
struct SpectrumReport {
    std::vector<double> eigenvalues; ///< ascending
    std::size_t zero_multiplicity = 0;
    Stability classification = Stability::unstable;
    double zero_tol = 0.0;

    [[nodiscard]] double max_eigenvalue() const { return eigenvalues.back(); }
};

/// Equilibria must satisfy residual < this before jacobian() accepts them.
inline constexpr double equilibrium_residual_tol = 1e-8;

enum class EquilibriumCheck { enforce, skip };

/// Symmetric Jacobian of the flow at s. Throws PreconditionError when s is
/// not an equilibrium, unless `check` is skip.
[[nodiscard]] Eigen::MatrixXd jacobian(const Graph& g, const PhaseState& s,
                                       EquilibriumCheck check = EquilibriumCheck::enforce);

/// Default zero tolerance 1e-8 * n.
[[nodiscard]] SpectrumReport spectrum(const Graph& g, const PhaseState& s, std::optional<double> zero_tol = {},
                                      EquilibriumCheck check = EquilibriumCheck::enforce);

/// Classify an ascending eigenvalue list.
[[nodiscard]] SpectrumReport classify(std::vector<double> eigenvalues, double zero_tol);

/// {"eigenvalues": [...], "zero_multiplicity": k, "classification": "stable"|...}
[[nodiscard]] nlohmann::json to_json(const SpectrumReport& r);

} // namespace kuramoto
