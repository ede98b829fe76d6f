#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

namespace kuramoto {

/// True when (rho1, rho2_abs) satisfies both moment inequalities a stable
/// equilibrium must obey at this mu_tilde: the rho_1^2 lower bound and the
/// |rho_2| lower bound maximised over x0. At rho1 = 0 the second bound is
/// void and only the first is tested.
[[nodiscard]] bool moment_point_feasible(double rho1, double rho2_abs, double mu_tilde);

/// Grid points of one row (fixed rho1 index) with rho2 indices in [begin, end).
struct FeasibleRun {
    std::size_t row = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
};

/// Connected (4-neighbour) cluster of feasible grid points.
struct FeasibleComponent {
    std::size_t row_min = 0, row_max = 0; ///< rho1 indices, inclusive
    std::size_t col_min = 0, col_max = 0; ///< rho2 indices, inclusive
    std::size_t points = 0;
};

/// Feasible set on the grid {0, h, 2h, ...} x {0, h, ...} inside [0,1]^2,
/// stored as row runs. Grid point (i, j) stands for (rho1, |rho2|) = (i h, j h).
struct FeasibilityRegion {
    double mu_tilde = 0.0;
    double grid_step = 0.0;
    std::size_t grid_size = 0; ///< points per axis
    std::vector<FeasibleRun> runs; ///< sorted by (row, begin)
    std::vector<FeasibleComponent> components; ///< sorted by row_min

    [[nodiscard]] double coordinate(std::size_t index) const;
    [[nodiscard]] bool contains(std::size_t row, std::size_t col) const;
    [[nodiscard]] std::size_t point_count() const;
};

/// Scan the grid (rows in parallel) and label components.
[[nodiscard]] FeasibilityRegion feasibility_scan(double mu_tilde, double grid_step);

/// Bisection-refined boundaries of a two-component region: the lower edge of
/// the synchronised component and the outer corner of the near-incoherent one.
struct RegionThresholds {
    double sync_rho1_min = 0.0;
    std::optional<double> pattern_rho1_max; ///< absent when there is no low component
    std::optional<double> pattern_rho2_max;
};

/// Requires at least one component. The component with the largest rho1 is
/// the synchronised one; a second component, if any, must sit at rho1 below it.
[[nodiscard]] RegionThresholds refine_thresholds(const FeasibilityRegion& region);

[[nodiscard]] nlohmann::json to_json(const FeasibilityRegion& region);
[[nodiscard]] nlohmann::json to_json(const RegionThresholds& t);

/// Point cloud with header `rho1,rho2_abs,feasible`, one line per grid point.
void write_region_csv(std::ostream& out, const FeasibilityRegion& region);

} // namespace kuramoto
