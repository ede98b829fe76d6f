#include "kuramoto/moments.hpp"

#include <cmath>

#include "kuramoto/errors.hpp"

namespace kuramoto {

std::complex<double> moment(const PhaseState& s, int m)
{
    if (m < 1) throw DomainError("moment order must be >= 1");
    if (s.size() == 0) throw DomainError("moment of an empty state");
    const double md = static_cast<double>(m);
    double re = 0.0;
    double im = 0.0;
    for (auto t : s.theta()) {
        re += std::cos(md * t);
        im += std::sin(md * t);
    }
    const double n = static_cast<double>(s.size());
    return {re / n, im / n};
}

MomentSet moments(const PhaseState& s, int max_order)
{
    if (max_order < 1) throw DomainError("moment order must be >= 1");
    MomentSet out;
    out.rho.reserve(static_cast<std::size_t>(max_order));
    for (int m = 1; m <= max_order; ++m) out.rho.push_back(moment(s, m));
    return out;
}

double fourier_identity_residual(const PhaseState& s, int m)
{
    if (m < 1) throw DomainError("moment order must be >= 1");
    const auto th = s.theta();
    const auto n = th.size();
    const double md = static_cast<double>(m);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const double c = std::cos(md * (th[k] - th[j]));
            sum += c * c;
        }
    }
    const double nn = static_cast<double>(n);
    const double lhs = sum / (nn * nn);
    const double rhs = 0.5 * (1.0 + std::norm(moment(s, 2 * m)));
    return std::abs(lhs - rhs);
}

} // namespace kuramoto
