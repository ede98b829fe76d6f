#include "kuramoto/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "kuramoto/dynamics.hpp"
#include "kuramoto/errors.hpp"
#include "kuramoto/kernels.hpp"

namespace kuramoto {

std::string_view to_string(Stability s) noexcept
{
    switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
    }
    return "unknown";
}

Eigen::MatrixXd jacobian(const Graph& g, const PhaseState& s, EquilibriumCheck check)
{
    if (g.size() != s.size()) throw DomainError("jacobian: state and graph sizes differ");
    if (check == EquilibriumCheck::enforce) {
        const double r = residual(g, s);
        if (!(r < equilibrium_residual_tol))
            throw PreconditionError("jacobian: state is not an equilibrium (residual " + std::to_string(r) + ")");
    }
    return kernels::jacobian(g, s.theta());
}

SpectrumReport classify(std::vector<double> eigenvalues, double zero_tol)
{
    if (eigenvalues.empty()) throw DomainError("classify: empty spectrum");
    std::sort(eigenvalues.begin(), eigenvalues.end());
    SpectrumReport r;
    r.zero_tol = zero_tol;
    r.zero_multiplicity = static_cast<std::size_t>(
        std::count_if(eigenvalues.begin(), eigenvalues.end(), [&](double l) { return std::abs(l) < zero_tol; }));
    if (eigenvalues.back() > zero_tol)
        r.classification = Stability::unstable;
    else if (r.zero_multiplicity >= 2)
        r.classification = Stability::marginal;
    else
        r.classification = Stability::stable;
    r.eigenvalues = std::move(eigenvalues);
    return r;
}

SpectrumReport spectrum(const Graph& g, const PhaseState& s, std::optional<double> zero_tol, EquilibriumCheck check)
{
    const Eigen::MatrixXd jac = jacobian(g, s, check);
    std::vector<double> values;
    // The tridiagonal QR occasionally stalls on the heavily degenerate spectra
    // of dense circulants. A diagonal shift leaves the eigenvectors alone and
    // moves the eigenvalues by exactly sigma (up to eps * sigma), which is
    // enough to get it going again.
    const double scale = std::max(1.0, jac.cwiseAbs().rowwise().sum().maxCoeff());
    for (const double sigma : {0.0, 0.5 * scale, -0.5 * scale, 0.25 * scale}) {
        const Eigen::MatrixXd shifted = jac + sigma * Eigen::MatrixXd::Identity(jac.rows(), jac.cols());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(shifted, Eigen::EigenvaluesOnly);
        if (eig.info() != Eigen::Success) continue;
        values.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
        for (auto& v : values) v -= sigma;
        break;
    }
    if (values.empty() && jac.rows() > 0) throw NumericError("spectrum: symmetric eigensolver did not converge");
    for (auto v : values)
        if (!std::isfinite(v)) throw NumericError("spectrum: non-finite eigenvalue");
    return classify(std::move(values), zero_tol.value_or(1e-8 * static_cast<double>(g.size())));
}

nlohmann::json to_json(const SpectrumReport& r)
{
    return {{"eigenvalues", r.eigenvalues},
            {"zero_multiplicity", r.zero_multiplicity},
            {"classification", std::string(to_string(r.classification))}};
}

} // namespace kuramoto
