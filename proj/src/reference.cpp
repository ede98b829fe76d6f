#include "kuramoto/reference.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <tuple>

#include "kuramoto/errors.hpp"

namespace kuramoto::reference {

void pairwise_rhs(const Graph& g, std::span<const double> theta, std::span<double> out)
{
    const auto n = g.size();
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (k != j && g.adjacent(j, k)) acc += std::sin(theta[k] - theta[j]);
        out[j] = acc;
    }
}

double pairwise_energy(const Graph& g, std::span<const double> theta)
{
    const auto n = g.size();
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            if (g.adjacent(j, k)) total += std::cos(theta[k] - theta[j]);
    return -0.5 * total;
}

double factored_rhs(const Graph& g, std::span<const double> theta, std::span<double> out)
{
    const auto n = g.size();
    std::vector<double> s(n), c(n);
    for (std::size_t j = 0; j < n; ++j) {
        s[j] = std::sin(theta[j]);
        c[j] = std::cos(theta[j]);
    }
    double cos_sum = g.self_loops() ? static_cast<double>(n) : 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double ss = 0.0, cs = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == j || !g.adjacent(j, k)) continue;
            ss += s[k];
            cs += c[k];
        }
        out[j] = c[j] * ss - s[j] * cs;
        cos_sum += c[j] * cs + s[j] * ss;
    }
    return -0.5 * cos_sum;
}

Eigen::MatrixXd jacobian(const Graph& g, std::span<const double> theta)
{
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            if (k == j || !g.adjacent(static_cast<std::size_t>(j), static_cast<std::size_t>(k))) continue;
            const double c = std::cos(theta[static_cast<std::size_t>(k)] - theta[static_cast<std::size_t>(j)]);
            jac(j, k) = c;
            jac(j, j) -= c;
        }
    }
    return jac;
}

std::vector<char> feasibility_grid(double mu_tilde, double grid_step, std::size_t& grid_size)
{
    if (!(grid_step > 0.0 && grid_step <= 0.5)) throw DomainError("feasibility_grid: grid_step must lie in (0, 0.5]");
    grid_size = static_cast<std::size_t>(std::floor(1.0 / grid_step + 1e-9)) + 1;
    std::vector<char> grid(grid_size * grid_size, 0);
    for (std::size_t i = 0; i < grid_size; ++i)
        for (std::size_t j = 0; j < grid_size; ++j)
            grid[i * grid_size + j] = moment_point_feasible(std::min(1.0, static_cast<double>(i) * grid_step),
                                                            std::min(1.0, static_cast<double>(j) * grid_step), mu_tilde);
    return grid;
}

FeasibilityRegion feasibility_scan(double mu_tilde, double grid_step)
{
    FeasibilityRegion region;
    region.mu_tilde = mu_tilde;
    region.grid_step = grid_step;
    const auto grid = feasibility_grid(mu_tilde, grid_step, region.grid_size);
    const auto size = region.grid_size;

    for (std::size_t i = 0; i < size; ++i) {
        std::size_t j = 0;
        while (j < size) {
            if (!grid[i * size + j]) {
                ++j;
                continue;
            }
            const auto start = j;
            while (j < size && grid[i * size + j]) ++j;
            region.runs.push_back({i, start, j});
        }
    }

    std::vector<char> seen(grid.size(), 0);
    for (std::size_t start = 0; start < grid.size(); ++start) {
        if (!grid[start] || seen[start]) continue;
        FeasibleComponent c{start / size, start / size, start % size, start % size, 0};
        std::deque<std::size_t> queue{start};
        seen[start] = 1;
        while (!queue.empty()) {
            const auto p = queue.front();
            queue.pop_front();
            const auto i = p / size, j = p % size;
            c.row_min = std::min(c.row_min, i);
            c.row_max = std::max(c.row_max, i);
            c.col_min = std::min(c.col_min, j);
            c.col_max = std::max(c.col_max, j);
            ++c.points;
            auto visit = [&](std::size_t q) {
                if (grid[q] && !seen[q]) {
                    seen[q] = 1;
                    queue.push_back(q);
                }
            };
            if (i > 0) visit(p - size);
            if (i + 1 < size) visit(p + size);
            if (j > 0) visit(p - 1);
            if (j + 1 < size) visit(p + 1);
        }
        region.components.push_back(c);
    }
    std::sort(region.components.begin(), region.components.end(), [](const auto& a, const auto& b) {
        return std::tie(a.row_min, a.col_min) < std::tie(b.row_min, b.col_min);
    });
    return region;
}

} // namespace kuramoto::reference
