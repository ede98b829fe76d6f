#include "kuramoto/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>

#include "kuramoto/certificates.hpp"
#include "kuramoto/moments.hpp"

namespace kuramoto {

namespace {

constexpr double quarter_turn = std::numbers::pi / 2.0;

struct PhiScore {
    std::size_t members = 0;
    double squared_deviation = 0.0;
};

PhiScore score(std::span<const double> theta, double phi)
{
    PhiScore s;
    for (double t : theta) {
        const double d = std::abs(std::remainder(t - phi, quarter_turn));
        if (d <= cluster_spread_threshold) {
            ++s.members;
            s.squared_deviation += d * d;
        }
    }
    return s;
}

} // namespace

double ClusterReport::centre(std::size_t k) const
{
    return wrap_phase(phi + static_cast<double>(k) * quarter_turn);
}

ClusterReport cluster_analysis(const PhaseState& s, std::optional<double> mu_tilde)
{
    const auto theta = s.theta();
    const auto steps = static_cast<std::size_t>(std::ceil(quarter_turn / cluster_phi_step));

    ClusterReport r;
    PhiScore best{};
    bool have_best = false;
    for (std::size_t i = 0; i < steps; ++i) {
        const double phi = static_cast<double>(i) * cluster_phi_step;
        const auto sc = score(theta, phi);
        if (!have_best || sc.members > best.members ||
            (sc.members == best.members && sc.squared_deviation < best.squared_deviation)) {
            best = sc;
            r.phi = phi;
            have_best = true;
        }
    }

    for (double t : theta) {
        const double rel = t - r.phi;
        const double d = std::remainder(rel, quarter_turn);
        if (std::abs(d) > cluster_spread_threshold) {
            ++r.rogue_count;
            continue;
        }
        auto k = static_cast<long>(std::lround((rel - d) / quarter_turn)) % 4;
        if (k < 0) k += 4;
        const auto idx = static_cast<std::size_t>(k);
        ++r.sizes[idx];
        r.spreads[idx] = std::max(r.spreads[idx], std::abs(d));
    }

    const auto mom = moments(s, 2);
    const double rho1 = std::abs(mom(1));
    const double rho2 = std::abs(mom(2));
    r.regime_applies = rho1 < case_ii_rho1 && rho2 < case_ii_rho2 && (!mu_tilde || *mu_tilde >= case_ii_mu_tilde);
    if (r.regime_applies) {
        const double n = static_cast<double>(s.size());
        const double pair_min = cluster_pair_fraction * n;
        const bool pair_ok = (static_cast<double>(r.sizes[0]) >= pair_min && static_cast<double>(r.sizes[2]) >= pair_min) ||
                             (static_cast<double>(r.sizes[1]) >= pair_min && static_cast<double>(r.sizes[3]) >= pair_min);
        r.regime_bounds_hold = pair_ok && static_cast<double>(r.rogue_count) <= cluster_rogue_fraction * n;
    }
    return r;
}

nlohmann::json to_json(const ClusterReport& r)
{
    nlohmann::json j{{"phi", r.phi},
                     {"cluster_sizes", r.sizes},
                     {"cluster_spreads", r.spreads},
                     {"rogue_count", r.rogue_count},
                     {"regime_applies", r.regime_applies}};
    j["regime_bounds_hold"] = r.regime_bounds_hold ? nlohmann::json(*r.regime_bounds_hold) : nlohmann::json(nullptr);
    return j;
}

} // namespace kuramoto
