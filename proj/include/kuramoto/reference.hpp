#pragma once

// Plain single-threaded versions of the parallel kernels. They share no code
// with kernels.cpp or feasibility.cpp and exist for the equivalence tests and
// the benchmark.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kuramoto/feasibility.hpp"
#include "kuramoto/graph.hpp"

namespace kuramoto::reference {

void pairwise_rhs(const Graph& g, std::span<const double> theta, std::span<double> out);
[[nodiscard]] double pairwise_energy(const Graph& g, std::span<const double> theta);
/// Factored sin/cos form, no OpenMP; energy returned as in the kernel.
double factored_rhs(const Graph& g, std::span<const double> theta, std::span<double> out);
[[nodiscard]] Eigen::MatrixXd jacobian(const Graph& g, std::span<const double> theta);

/// Dense boolean grid, row-major (rho1 index major), size grid_size^2.
[[nodiscard]] std::vector<char> feasibility_grid(double mu_tilde, double grid_step, std::size_t& grid_size);

/// Grid evaluated point by point, components labelled by breadth-first
/// flood fill over 4-neighbours. Result is comparable field by field with
/// kuramoto::feasibility_scan.
[[nodiscard]] FeasibilityRegion feasibility_scan(double mu_tilde, double grid_step);

} // namespace kuramoto::reference
