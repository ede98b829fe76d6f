#pragma once

// OpenMP kernels for the O(n^2) inner loops. Each has a serial twin in
// reference.hpp that the tests compare against. Row j of every kernel is a
// plain sequential loop, so per-row outputs are bit-identical to the serial
// version regardless of thread count; totals are formed from per-row
// partials in row order.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kuramoto/graph.hpp"

namespace kuramoto::kernels {

/// Below this many rows the kernels stay on the calling thread.
inline constexpr std::size_t parallel_min_rows = 128;

/// out_j = sum_k A_jk sin(theta_k - theta_j).
void pairwise_rhs(const Graph& g, std::span<const double> theta, std::span<double> out);

/// -1/2 sum_{j,k} A_jk cos(theta_k - theta_j), diagonal included.
[[nodiscard]] double pairwise_energy(const Graph& g, std::span<const double> theta);

/// Scratch for the factored kernel; reused across calls to avoid allocation.
struct FactoredWorkspace {
    std::vector<double> sin_theta, cos_theta, row_energy;
};

/// Same right-hand side via sin(b - a) = sin b cos a - cos b sin a:
/// two dense row sums per node and only 2n trig calls. Returns the energy at
/// theta as a by-product.
double factored_rhs(const Graph& g, std::span<const double> theta, std::span<double> out, FactoredWorkspace& ws);

/// J_jk = A_jk cos(theta_k - theta_j) off the diagonal, rows summing to zero.
[[nodiscard]] Eigen::MatrixXd jacobian(const Graph& g, std::span<const double> theta);

} // namespace kuramoto::kernels
