#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "kuramoto/dynamics.hpp"
#include "kuramoto/errors.hpp"
#include "kuramoto/moments.hpp"
#include "oracles.hpp"

using namespace kuramoto;

namespace {

oracle::Matrix dense(const Graph& g)
{
    return oracle::adjacency(g.size(), [&](std::size_t j, std::size_t k) { return g.adjacent(j, k); }, g.self_loops());
}

Graph random_graph(std::mt19937_64& rng, std::size_t n, double p)
{
    std::bernoulli_distribution edge(p);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k)
            if (edge(rng)) edges.emplace_back(j, k);
    return Graph::from_edges(n, edges, std::bernoulli_distribution(0.5)(rng));
}

std::vector<double> random_phases(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    std::vector<double> th(n);
    for (auto& t : th) t = u(rng);
    return th;
}

} // namespace

TEST_SUITE("dynamics") {

TEST_CASE("rhs and energy agree with the definitions")
{
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 30; ++rep) {
        const auto n = 2 + rng() % 30;
        const auto g = random_graph(rng, n, 0.5);
        const auto th = random_phases(rng, n);
        const PhaseState s(th);
        const auto a = dense(g);
        const auto r = rhs(g, s);
        for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(r[j] - oracle::rhs_j(a, th, j)) < 1e-12 * static_cast<double>(n));
        CHECK(std::abs(energy(g, s) - oracle::energy(a, th)) < 1e-12 * static_cast<double>(n * n));
    }
}

TEST_CASE("rhs is minus the energy gradient")
{
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 20; ++rep) {
        const auto n = 2 + rng() % 20;
        const auto g = random_graph(rng, n, 0.6);
        const auto th = random_phases(rng, n);
        const auto r = rhs(g, PhaseState(th));
        auto e = [&](const std::vector<double>& x) { return energy(g, PhaseState(x)); };
        for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(r[j] + oracle::partial(e, th, j)) < 1e-6);
    }
}

TEST_CASE("size mismatch is a domain error")
{
    const auto g = cycle_graph(5);
    CHECK_THROWS_AS((void)rhs(g, PhaseState::all_in_phase(4)), DomainError);
    CHECK_THROWS_AS((void)energy(g, PhaseState::all_in_phase(6)), DomainError);
    CHECK_THROWS_AS((void)integrate(g, PhaseState::all_in_phase(5), 0.0), DomainError);
}

TEST_CASE("rk4 lands on t_end and energy decreases")
{
    std::mt19937_64 rng(13);
    const auto g = circulant(12, {1, 2, 3});
    const PhaseState s0(random_phases(rng, 12));
    IntegratorOptions o;
    o.dt = 0.03;
    const auto tr = integrate(g, s0, 1.0, o);
    CHECK(tr.steps == 34);
    CHECK(tr.times.back() == 1.0);
    CHECK(tr.times.size() == 35);
    CHECK(tr.max_energy_increase <= 1e-12);
    for (std::size_t i = 1; i < tr.energies.size(); ++i) CHECK(tr.energies[i] <= tr.energies[i - 1] + 1e-12);
}

TEST_CASE("dopri45 and rk4 agree")
{
    std::mt19937_64 rng(14);
    const auto g = circulant(9, {1, 3});
    const PhaseState s0(random_phases(rng, 9));
    IntegratorOptions rk;
    rk.dt = 1e-3;
    rk.record_stride = 0;
    IntegratorOptions dp;
    dp.method = IntegratorMethod::dopri45;
    dp.record_stride = 0;
    dp.rtol = dp.atol = 1e-10;
    const auto a = integrate(g, s0, 3.0, rk);
    const auto b = integrate(g, s0, 3.0, dp);
    CHECK(a.states.size() == 2);
    CHECK(phase_distance(a.final_state(), b.final_state()) < 1e-7);
    CHECK(b.times.back() == doctest::Approx(3.0));
}

TEST_CASE("early stop on residual")
{
    const auto g = complete_graph(6);
    std::mt19937_64 rng(15);
    IntegratorOptions o;
    o.stop_residual = 1e-8;
    o.record_stride = 0;
    const auto tr = integrate(g, PhaseState(random_phases(rng, 6)), 1000.0, o);
    CHECK(tr.stopped_early);
    CHECK(tr.final_residual < 1e-8);
    CHECK(tr.times.back() < 1000.0);
}

TEST_CASE("dopri45 gives up below min_dt")
{
    const auto g = complete_graph(5);
    std::mt19937_64 rng(16);
    IntegratorOptions o;
    o.method = IntegratorMethod::dopri45;
    o.rtol = o.atol = 1e-300;
    o.min_dt = 1e-3;
    CHECK_THROWS_AS((void)integrate(g, PhaseState(random_phases(rng, 5)), 10.0, o), IntegrationError);
}

TEST_CASE("trajectory csv layout")
{
    const auto g = cycle_graph(3);
    IntegratorOptions o;
    o.dt = 0.5;
    const auto tr = integrate(g, PhaseState({0.0, 0.1, 0.2}), 1.0, o);
    std::ostringstream os;
    write_trajectory_csv(os, tr);
    std::istringstream in(os.str());
    std::string header, line;
    std::getline(in, header);
    CHECK(header == "t,theta_0,theta_1,theta_2,energy,rho1_abs");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("refinement converges to the nearby equilibrium")
{
    const auto g = cycle_graph(5);
    const auto target = PhaseState::twisted(5, 1);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> noise(0.0, 1e-3);
    std::vector<double> th(target.theta().begin(), target.theta().end());
    for (auto& t : th) t += noise(rng);
    const auto refined = refine_equilibrium(g, PhaseState(th));
    CHECK(residual(g, refined) < 1e-12);
    CHECK(phase_distance_mod_rotation(refined, target) < 1e-2);
    // mean phase is untouched by the Newton steps
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
        m0 += th[j];
        m1 += refined[j];
    }
    CHECK(std::abs(std::remainder(m0 - m1, 2 * std::numbers::pi)) < 1e-9);
}

TEST_CASE("refinement failure reports the best iterate")
{
    const auto g = complete_graph(4);
    RefineOptions o;
    o.max_iterations = 1;
    o.tol = 1e-300;
    try {
        (void)refine_equilibrium(g, PhaseState({0.0, 1.0, 2.0, 2.5}), o);
        FAIL("expected RefinementError");
    } catch (const RefinementError& e) {
        CHECK(e.best().size() == 4);
        CHECK(e.residual() >= 0.0);
    }
}

TEST_CASE("normalize_phase makes rho_1 real")
{
    const PhaseState s({0.3, 0.5, 1.1, -0.2});
    const auto ns = normalize_phase(s);
    const auto r = moment(ns.state, 1);
    CHECK(ns.rho1_gauge);
    CHECK(std::abs(r.imag()) < 1e-14);
    CHECK(r.real() > 0.0);

    const auto t = normalize_phase(PhaseState::twisted(6, 1).shifted(0.4));
    CHECK_FALSE(t.rho1_gauge);
    CHECK(t.state[0] == 0.0);
}

TEST_CASE("rhs sums to zero and ignores self-loops")
{
    std::mt19937_64 rng(45);
    std::uniform_real_distribution<double> u(-3.2, 3.2);
    for (int rep = 0; rep < 100; ++rep) {
        const auto n = 2 + rng() % 30;
        const auto g = circulant(n, {1});
        std::vector<double> th(n);
        for (auto& t : th) t = u(rng);
        const PhaseState s(th);
        const auto r = rhs(g, s);
        double sum = 0.0;
        for (double v : r) sum += v;
        CHECK(std::abs(sum) < 1e-10 * static_cast<double>(n));
        CHECK(rhs(add_self_loops(g), s) == r);
    }
}

TEST_CASE("refinement is idempotent")
{
    for (std::size_t n : {5UL, 7UL, 12UL}) {
        const auto g = circulant(n, {1, 2});
        for (std::size_t q = 0; q <= n / 2; ++q) {
            const auto once = refine_equilibrium(g, PhaseState::twisted(n, static_cast<long>(q)).shifted(0.3));
            const auto twice = refine_equilibrium(g, once);
            double worst = 0.0;
            for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(std::remainder(once[j] - twice[j], 2 * std::numbers::pi)));
            CHECK(worst < 1e-12);
        }
    }
}

}
