#pragma once

#include <complex>
#include <vector>

#include "kuramoto/phase_state.hpp"

namespace kuramoto {

/// Daido moment rho_m = (1/n) sum_j exp(i m theta_j), m >= 1.
[[nodiscard]] std::complex<double> moment(const PhaseState& s, int m);

struct MomentSet {
    std::vector<std::complex<double>> rho; ///< rho[m-1] holds rho_m

    [[nodiscard]] int order() const noexcept { return static_cast<int>(rho.size()); }
    [[nodiscard]] const std::complex<double>& operator()(int m) const { return rho.at(static_cast<std::size_t>(m - 1)); }
};

/// rho_1 .. rho_max_order in one pass per order.
[[nodiscard]] MomentSet moments(const PhaseState& s, int max_order);

/// |(1/n^2) sum_{j,k} cos^2(m(theta_k - theta_j)) - (1 + |rho_2m|^2)/2|.
/// The double sum is evaluated literally; the identity makes this roundoff.
[[nodiscard]] double fourier_identity_residual(const PhaseState& s, int m);

} // namespace kuramoto
