#include <doctest.h>

#include <numbers>

#include "kuramoto/clusters.hpp"

using namespace kuramoto;
using std::numbers::pi;

namespace {

std::vector<double> four_groups(std::size_t per, double phi)
{
    std::vector<double> th;
    for (int k = 0; k < 4; ++k)
        for (std::size_t i = 0; i < per; ++i) th.push_back(phi + k * pi / 2);
    return th;
}

} // namespace

TEST_SUITE("clusters") {

TEST_CASE("exact four-group state")
{
    const auto r = cluster_analysis(PhaseState(four_groups(10, 0.3)));
    CHECK(r.phi == doctest::Approx(0.3).epsilon(1e-9));
    for (int k = 0; k < 4; ++k) {
        CHECK(r.sizes[k] == 10);
        CHECK(r.spreads[k] < 1e-9);
    }
    CHECK(r.rogue_count == 0);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(std::remainder(r.centre(k) - (0.3 + k * pi / 2), 2 * pi)) < 1e-9);
}

TEST_CASE("all-in-phase is a single cluster")
{
    const auto r = cluster_analysis(PhaseState::all_in_phase(12, 1.0));
    std::size_t total = 0, nonempty = 0;
    for (auto s : r.sizes) {
        total += s;
        nonempty += s > 0;
    }
    CHECK(total == 12);
    CHECK(nonempty == 1);
    CHECK(r.rogue_count == 0);
    CHECK_FALSE(r.regime_applies);
    CHECK_FALSE(r.regime_bounds_hold.has_value());
}

TEST_CASE("an oscillator half-way between centres is rogue")
{
    auto th = four_groups(10, 0.3);
    th.push_back(0.3 + pi / 4);
    const auto r = cluster_analysis(PhaseState(th));
    CHECK(r.rogue_count == 1);
    std::size_t total = r.rogue_count;
    for (auto s : r.sizes) total += s;
    CHECK(total == 41);
}

TEST_CASE("regime flag and bounds")
{
    // balanced four-group state: rho_1 = rho_2 = 0
    const auto r = cluster_analysis(PhaseState(four_groups(10, 0.0)), 0.76);
    CHECK(r.regime_applies);
    REQUIRE(r.regime_bounds_hold.has_value());
    CHECK(*r.regime_bounds_hold);

    CHECK_FALSE(cluster_analysis(PhaseState(four_groups(10, 0.0)), 0.7).regime_applies);

    // spread-out incoherent state: regime applies, cluster bounds fail
    const auto inc = cluster_analysis(PhaseState::twisted(40, 1), 0.76);
    CHECK(inc.regime_applies);
    REQUIRE(inc.regime_bounds_hold.has_value());
    CHECK_FALSE(*inc.regime_bounds_hold);
    const auto j = to_json(inc);
    CHECK(j["cluster_sizes"].size() == 4);
    CHECK(j["regime_bounds_hold"] == false);
}

}
