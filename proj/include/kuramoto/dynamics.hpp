#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "kuramoto/errors.hpp"
#include "kuramoto/graph.hpp"
#include "kuramoto/phase_state.hpp"

namespace kuramoto {

/// d theta_j / dt = sum_k A_jk sin(theta_k - theta_j). Self-loop terms are exactly zero.
[[nodiscard]] std::vector<double> rhs(const Graph& g, const PhaseState& s);

/// max_j |rhs_j|, the equilibrium residual.
[[nodiscard]] double residual(const Graph& g, const PhaseState& s);

/// Potential whose negative gradient is rhs: -1/2 sum_{j,k} A_jk cos(theta_k - theta_j).
[[nodiscard]] double energy(const Graph& g, const PhaseState& s);

enum class IntegratorMethod { rk4, dopri45 };

struct IntegratorOptions {
    IntegratorMethod method = IntegratorMethod::rk4;
    double dt = 0.01;           ///< fixed step, or initial step for dopri45
    double rtol = 1e-8;         ///< dopri45 only
    double atol = 1e-8;         ///< dopri45 only
    double min_dt = 1e-12;      ///< dopri45 gives up below this step
    /// Record every k-th accepted step; 0 keeps only the endpoints.
    std::size_t record_stride = 1;
    /// Stop as soon as the residual drops below this value (0 disables).
    double stop_residual = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<PhaseState> states;
    std::vector<double> energies;

    std::size_t steps = 0;             ///< accepted steps
    double final_residual = 0.0;
    bool stopped_early = false;        ///< stop_residual reached before t_end
    /// Largest energy rise between consecutive accepted steps (<= 0 for a clean run).
    double max_energy_increase = 0.0;

    [[nodiscard]] const PhaseState& final_state() const { return states.back(); }
};

/// Dopri45 step size fell below min_dt. Carries what was computed so far.
class IntegrationError : public NumericError {
public:
    IntegrationError(const std::string& what, Trajectory partial)
        : NumericError(what), partial_(std::move(partial))
    {
    }
    [[nodiscard]] const Trajectory& partial() const noexcept { return partial_; }

private:
    Trajectory partial_;
};

/// Integrate the gradient flow from s0 to t_end (or until stop_residual is met).
/// Phases are re-wrapped to (-pi, pi] after every step.
[[nodiscard]] Trajectory integrate(const Graph& g, const PhaseState& s0, double t_end,
                                   const IntegratorOptions& opts = {});

/// CSV columns: t, theta_0..theta_{n-1}, energy, rho1_abs.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

struct RefineOptions {
    double tol = 1e-12;
    std::size_t max_iterations = 100;
};

class RefinementError : public NumericError {
public:
    RefinementError(const std::string& what, PhaseState best, double residual)
        : NumericError(what), best_(std::move(best)), residual_(residual)
    {
    }
    [[nodiscard]] const PhaseState& best() const noexcept { return best_; }
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    PhaseState best_;
    double residual_;
};

/// Newton iteration on rhs = 0. The Jacobian always has the rotation mode
/// (1,...,1) in its kernel, so each step is a pseudo-inverse solve on the
/// complement of the (numerical) null space; the step never moves the mean phase.
[[nodiscard]] PhaseState refine_equilibrium(const Graph& g, const PhaseState& s0, const RefineOptions& opts = {});

struct NormalizedState {
    PhaseState state;
    /// False when |rho_1| < 1e-14: no rotation makes rho_1 real, so theta_0
    /// was pinned to zero instead.
    bool rho1_gauge = true;
    double shift = 0.0; ///< amount subtracted from every phase
};

/// Rotate so that rho_1 is real and non-negative.
[[nodiscard]] NormalizedState normalize_phase(const PhaseState& s);

} // namespace kuramoto
