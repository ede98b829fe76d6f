#include "kuramoto/phase_state.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "kuramoto/errors.hpp"

namespace kuramoto {

double wrap_phase(double x) noexcept
{
    if (x > -std::numbers::pi && x <= std::numbers::pi) return x;
    double r = std::remainder(x, two_pi); // [-pi, pi]
    if (r <= -std::numbers::pi) r += two_pi;
    return r;
}

PhaseState::PhaseState(std::vector<double> theta) : theta_(std::move(theta))
{
    for (auto& t : theta_) {
        if (!std::isfinite(t)) throw DomainError("phase state contains a non-finite value");
        t = wrap_phase(t);
    }
}

PhaseState PhaseState::all_in_phase(std::size_t n, double phase)
{
    return PhaseState(std::vector<double>(n, phase));
}

PhaseState PhaseState::twisted(std::size_t n, long q)
{
    std::vector<double> theta(n);
    const auto nn = static_cast<long>(n);
    for (std::size_t j = 0; j < n; ++j) {
        // reduce q*j mod n first so the angle is formed from a small integer
        long r = (q * static_cast<long>(j)) % nn;
        if (r < 0) r += nn;
        theta[j] = two_pi * static_cast<double>(r) / static_cast<double>(n);
    }
    return PhaseState(std::move(theta));
}

PhaseState PhaseState::inherit(const PhaseState& parent, std::size_t tau)
{
    std::vector<double> theta;
    theta.reserve(parent.size() * tau);
    for (auto t : parent.theta())
        for (std::size_t c = 0; c < tau; ++c) theta.push_back(t);
    return PhaseState(std::move(theta));
}

PhaseState PhaseState::shifted(double delta) const
{
    std::vector<double> theta(theta_);
    for (auto& t : theta) t += delta;
    return PhaseState(std::move(theta));
}

double phase_distance(const PhaseState& a, const PhaseState& b)
{
    if (a.size() != b.size()) throw DomainError("phase_distance: size mismatch");
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(wrap_phase(a[j] - b[j])));
    return worst;
}

double phase_distance_mod_rotation(const PhaseState& a, const PhaseState& b)
{
    if (a.size() != b.size()) throw DomainError("phase_distance: size mismatch");
    std::complex<double> mean{0.0, 0.0};
    for (std::size_t j = 0; j < a.size(); ++j) mean += std::polar(1.0, a[j] - b[j]);
    const double shift = std::arg(mean);
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(wrap_phase(a[j] - b[j] - shift)));
    return worst;
}

} // namespace kuramoto
