#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace kuramoto {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Map an angle to (-pi, pi].
[[nodiscard]] double wrap_phase(double x) noexcept;

/// Phases theta_j of n oscillators in the rotating frame, stored wrapped to (-pi, pi].
class PhaseState {
public:
    PhaseState() = default;
    explicit PhaseState(std::vector<double> theta);

    [[nodiscard]] static PhaseState all_in_phase(std::size_t n, double phase = 0.0);
    /// theta_j = 2 pi q j / n.
    [[nodiscard]] static PhaseState twisted(std::size_t n, long q);
    /// Node p*tau + c of a twinned graph takes the phase of parent node p.
    [[nodiscard]] static PhaseState inherit(const PhaseState& parent, std::size_t tau);

    [[nodiscard]] std::size_t size() const noexcept { return theta_.size(); }
    [[nodiscard]] std::span<const double> theta() const noexcept { return theta_; }
    [[nodiscard]] double operator[](std::size_t j) const noexcept { return theta_[j]; }

    /// Shift every phase by `delta` and re-wrap.
    [[nodiscard]] PhaseState shifted(double delta) const;

    friend bool operator==(const PhaseState&, const PhaseState&) = default;

private:
    std::vector<double> theta_;
};

/// Largest |a_j - b_j| after accounting for the 2 pi identification.
[[nodiscard]] double phase_distance(const PhaseState& a, const PhaseState& b);

/// As phase_distance, but first removes the best common rotation (circular
/// mean of the differences). Equilibria are only defined up to rotation.
[[nodiscard]] double phase_distance_mod_rotation(const PhaseState& a, const PhaseState& b);

} // namespace kuramoto
