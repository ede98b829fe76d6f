#include "kuramoto/kernels.hpp"

#include <cmath>

namespace kuramoto::kernels {

namespace {

long as_long(std::size_t n)
{
    return static_cast<long>(n);
}

} // namespace

void pairwise_rhs(const Graph& g, std::span<const double> theta, std::span<double> out)
{
    const auto n = g.size();
#pragma omp parallel for schedule(static) if (n >= parallel_min_rows)
    for (long jj = 0; jj < as_long(n); ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        const auto row = g.row(j);
        const double tj = theta[j];
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (row[k]) acc += std::sin(theta[k] - tj);
        out[j] = acc;
    }
}

double pairwise_energy(const Graph& g, std::span<const double> theta)
{
    const auto n = g.size();
    std::vector<double> partial(n);
#pragma omp parallel for schedule(static) if (n >= parallel_min_rows)
    for (long jj = 0; jj < as_long(n); ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        const auto row = g.row(j);
        const double tj = theta[j];
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (row[k]) acc += std::cos(theta[k] - tj);
        partial[j] = acc;
    }
    double total = 0.0;
    for (auto p : partial) total += p;
    return -0.5 * total;
}

double factored_rhs(const Graph& g, std::span<const double> theta, std::span<double> out, FactoredWorkspace& ws)
{
    const auto n = g.size();
    ws.sin_theta.resize(n);
    ws.cos_theta.resize(n);
    ws.row_energy.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        ws.sin_theta[k] = std::sin(theta[k]);
        ws.cos_theta[k] = std::cos(theta[k]);
    }
    const double* sk = ws.sin_theta.data();
    const double* ck = ws.cos_theta.data();

#pragma omp parallel for schedule(static) if (n >= parallel_min_rows)
    for (long jj = 0; jj < as_long(n); ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        const double* w = g.coupling_row(j).data();
        double s = 0.0;
        double c = 0.0;
#pragma omp simd reduction(+ : s, c)
        for (std::size_t k = 0; k < n; ++k) {
            s += w[k] * sk[k];
            c += w[k] * ck[k];
        }
        out[j] = ck[j] * s - sk[j] * c;
        ws.row_energy[j] = ck[j] * c + sk[j] * s;
    }
    double total = 0.0;
    for (auto e : ws.row_energy) total += e;
    if (g.self_loops()) total += static_cast<double>(n);
    return -0.5 * total;
}

Eigen::MatrixXd jacobian(const Graph& g, std::span<const double> theta)
{
    const auto n = g.size();
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(ni, ni);
    // upper triangle first, mirrored, so J is exactly symmetric
#pragma omp parallel for schedule(dynamic, 8) if (n >= parallel_min_rows)
    for (long jj = 0; jj < as_long(n); ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        const auto row = g.row(j);
        for (std::size_t k = j + 1; k < n; ++k) {
            if (!row[k]) continue;
            const double v = std::cos(theta[k] - theta[j]);
            jac(jj, static_cast<Eigen::Index>(k)) = v;
            jac(static_cast<Eigen::Index>(k), jj) = v;
        }
    }
#pragma omp parallel for schedule(static) if (n >= parallel_min_rows)
    for (long jj = 0; jj < as_long(n); ++jj) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < ni; ++k)
            if (k != jj) acc += jac(jj, k);
        jac(jj, jj) = -acc;
    }
    return jac;
}

} // namespace kuramoto::kernels
