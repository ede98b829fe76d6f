#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kuramoto/certificates.hpp"
#include "kuramoto/dynamics.hpp"
#include "kuramoto/errors.hpp"
#include "kuramoto/harness.hpp"
#include "kuramoto/spectral.hpp"
#include "oracles.hpp"

using namespace kuramoto;
using std::numbers::pi;

namespace {

oracle::Matrix dense(const Graph& g)
{
    return oracle::adjacency(g.size(), [&](std::size_t j, std::size_t k) { return g.adjacent(j, k); }, g.self_loops());
}

std::vector<double> vec(const PhaseState& s)
{
    return {s.theta().begin(), s.theta().end()};
}

double sq(double x)
{
    return x * x;
}

} // namespace

TEST_SUITE("certificates") {

TEST_CASE("quadratic-form bound")
{
    CHECK(lxb_stability_value(add_self_loops(complete_graph(4)), PhaseState::all_in_phase(4)) == 0.0);
    CHECK(std::abs(lxb_stability_value(add_self_loops(cycle_graph(4)), PhaseState::twisted(4, 1))) < 1e-15);
    const auto c6 = cycle_graph(6);
    const auto s6 = PhaseState::twisted(6, 1);
    REQUIRE(spectrum(c6, s6).classification == Stability::stable);
    const double v = lxb_stability_value(c6, s6);
    CHECK(v < 0.0);
    CHECK(v == doctest::Approx(oracle::lxb(dense(c6), vec(s6))).epsilon(1e-12));
    CHECK(v == doctest::Approx(-3.0).epsilon(1e-12)); // 12 ordered edges, cos = 1/2: 12 (1/4 - 1/2)
}

TEST_CASE("non-edge inequality")
{
    for (const auto& g : {cycle_graph(7), circulant(9, {1, 3}), complete_graph(5)}) {
        const auto e = eq5_check(g, PhaseState::all_in_phase(g.size()));
        CHECK(std::abs(e.lhs) < 1e-13);
        CHECK(std::abs(e.rhs) < 1e-12);
    }
    const auto k2 = add_self_loops(complete_graph(2));
    const PhaseState split({0.0, pi});
    REQUIRE(spectrum(k2, split).classification == Stability::unstable);
    const auto e = eq5_check(k2, split);
    CHECK(e.lhs == 0.0);
    CHECK(e.rhs == doctest::Approx(-4.0));
    CHECK(e.lhs > e.rhs); // the inequality fails: instability certified
    CHECK(certify(k2, split).instability_certified());

    const auto c5 = cycle_graph(5);
    const auto s5 = PhaseState::twisted(5, 1);
    const auto f = eq5_check(c5, s5);
    CHECK(f.lhs == doctest::Approx(oracle::nonedge_cos_minus_cos2(dense(c5), vec(s5))).epsilon(1e-12));
    const auto r1 = std::abs(oracle::moment(vec(s5), 1));
    const auto r2 = std::abs(oracle::moment(vec(s5), 2));
    CHECK(f.rhs == doctest::Approx(12.5 * (2 * r1 * r1 - r2 * r2 - 1)).epsilon(1e-12));
    CHECK(f.lhs <= f.rhs + 1e-9 * 25);
}

TEST_CASE("per-oscillator cosine bound")
{
    // all-in-phase: mid = number of non-neighbours, lhs = n (1 - mu_tilde)
    const auto g = circulant(9, {1, 2});
    const auto mt = connectivity(g).mu_tilde.value();
    const auto r = lemma1_check(g, PhaseState::all_in_phase(9), 3);
    CHECK(r.mid == doctest::Approx(4.0));
    CHECK(r.lhs == doctest::Approx(9.0 * (1.0 - mt)));
    CHECK(r.lhs == doctest::Approx(r.mid)); // equality: rho_1 = 1, sin = 0
    CHECK(r.cosine_bound_holds);

    const auto k = add_self_loops(complete_graph(6));
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-3, 3);
    std::vector<double> th(6);
    for (auto& t : th) t = u(rng);
    CHECK(lemma1_check(k, PhaseState(th), 2).mid == 0.0);

    const auto c8 = add_self_loops(cycle_graph(8));
    const auto s8 = PhaseState::twisted(8, 1);
    const auto l = lemma1_check(c8, s8, 0);
    double mid = 0.0;
    for (std::size_t k2 = 1; k2 < 8; ++k2)
        if (!c8.adjacent(0, k2)) mid += std::abs(std::cos(s8[k2] - s8[0]));
    CHECK(l.mid == doctest::Approx(mid).epsilon(1e-12));
    CHECK(l.lhs >= l.mid);
    CHECK(l.eq8_holds);
    CHECK_THROWS_AS((void)lemma1_check(c8, s8, 8), DomainError);
}

TEST_CASE("corollary trigger")
{
    CHECK(corollary1_applies(1.0, 0.8));
    CHECK_FALSE(corollary1_applies(0.0, 0.9));
    CHECK(corollary1_applies(0.36, 0.7495));
    CHECK_FALSE(corollary1_applies(0.35, 0.7495));
    const auto c = corollary1_check(PhaseState::all_in_phase(5), 0.8);
    CHECK(c.applies);
    CHECK(c.sin_bound_holds());
    CHECK_FALSE(corollary1_check(PhaseState::twisted(7, 1), 0.99).applies);
}

TEST_CASE("sqrt-sum lower bound")
{
    CHECK(eq9_slack(PhaseState::all_in_phase(6), 0.7) == doctest::Approx(2 * 0.3));
    const auto c4 = add_self_loops(cycle_graph(4));
    CHECK(std::abs(eq9_slack(PhaseState::twisted(4, 1), connectivity(c4).mu_tilde.value())) < 1e-15);
    CHECK(eq9_slack(PhaseState::twisted(5, 1), 0.6) == doctest::Approx(0.3));
    // rho_1 |sin| far above 1 - mu_tilde: the bound does not apply
    CHECK_THROWS_AS((void)eq9_slack(PhaseState({0.0, 0.0, 0.0, 1.2}), 0.99), CertificateInapplicable);
}

TEST_CASE("rho_1^2 lower bound")
{
    CHECK(eq10_slack(PhaseState::all_in_phase(5), 1.0) == doctest::Approx(0.0));
    CHECK(eq10_slack(0.0, 0.0, 0.75) == 0.0);
    CHECK(eq10_slack(0.0, 0.0, 0.76) == doctest::Approx(-0.02));
}

TEST_CASE("tangent parameters")
{
    CHECK_THROWS_AS((void)lemma2_params(0.0, 0.7, 0.1), DomainError);
    CHECK_THROWS_AS((void)lemma2_params(0.3, 0.76, 0.7), DomainError); // beyond 0.0576/0.09
    CHECK_THROWS_AS((void)lemma2_params(0.3, 0.76, -0.01), DomainError);

    // right endpoint: b = 0 and the tangency sits where the radicand vanishes
    const double c = sq(0.24);
    const auto ep = lemma2_params(0.3, 0.76, c / 0.09);
    CHECK(ep.b == 0.0);
    CHECK(ep.value_residual() < 1e-12);
    CHECK(ep.slope_residual() == 0.0);

    const auto p = lemma2_params(0.3, 0.76, 0.2);
    CHECK(p.a == doctest::Approx(1 + 0.4 - 4 * c / 0.09));
    CHECK(p.b == doctest::Approx(std::sqrt(c - 0.09 * 0.2) / 0.09));
    CHECK(p.value_residual() < 1e-10);
    CHECK(p.slope_residual() < 1e-10);
    double worst = 1e300;
    for (int i = 0; i < 10000; ++i) {
        const double x = p.x_max() * i / 9999.0;
        worst = std::min(worst, p.f(x) - p.g(x));
    }
    CHECK(worst >= -1e-10);

    // g' against a finite difference on random admissible triples
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    while (checked < 100) {
        const double rho1 = 0.05 + 0.95 * u(rng);
        const double mu = u(rng);
        const double xm = std::min(1.0, sq(1 - mu) / sq(rho1));
        const double x0 = xm * (0.05 + 0.9 * u(rng));
        const auto q = lemma2_params(rho1, mu, x0);
        CHECK(q.value_residual() < 1e-10);
        CHECK(q.slope_residual() < 1e-10);
        const double h = 1e-6 * xm;
        const double fd = (q.g(x0 + h) - q.g(x0 - h)) / (2 * h);
        CHECK(std::abs(fd - q.g_prime(x0)) < 1e-5 * std::max(1.0, std::abs(fd)));
        ++checked;
    }
}

TEST_CASE("optimal x0 closed form")
{
    CHECK_THROWS_AS((void)lemma3_x0star(0.0, 0.8), CertificateInapplicable);
    CHECK_THROWS_AS((void)lemma3_x0star(0.8, 0.8), CertificateInapplicable); // 1 - 2 rho1^2 < 0
    CHECK_THROWS_AS((void)lemma3_x0star(0.05, 0.8), CertificateInapplicable); // rho1^2 < 2(mu - 3/4)

    const double r1 = std::sqrt(0.125);
    const auto l = lemma3_x0star(r1, 0.76);
    const double c = sq(0.24);
    CHECK(l.x0_star == doctest::Approx(c / 0.125 - sq(0.75) / (16 * 0.125)));
    CHECK(l.rho2_lower >= 0.5);
    const double e = 1 - 2 * 0.125;
    const double best = oracle::ab_grid_max(r1, 0.76, e, 100001);
    CHECK(oracle::ab_objective(r1, 0.76, e, l.x0_star) >= best - 1e-12);
    const double gs = oracle::golden_max([&](double x) { return oracle::ab_objective(r1, 0.76, e, x); }, 0.0,
                                         std::min(1.0, c / 0.125));
    CHECK(std::abs(gs - l.x0_star) < 1e-6);

    const auto half = lemma3_x0star(std::sqrt(0.5), 0.8);
    CHECK(half.x0_star == doctest::Approx(sq(0.2) / 0.5));

    // every mu_tilde > 3/4 gives |rho_2| >= 1/2
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double mu = 0.75 + 0.25 * u(rng);
        const double rho1 = std::sqrt(0.5) * u(rng);
        double lower = 1.0;
        try {
            lower = lemma3_x0star(rho1, mu).rho2_lower;
        } catch (const CertificateInapplicable&) {
        }
        CHECK(lower >= 0.5 - 1e-12);
    }
}

TEST_CASE("exact x0 maximisation agrees with golden section and grid")
{
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const double rho1 = 0.01 + 0.99 * u(rng);
        const double mu = 0.5 + 0.5 * u(rng);
        const double e = -1.0 + 3.0 * u(rng);
        const auto opt = optimal_x0(rho1, mu, e);
        const double xm = std::min(1.0, sq(1 - mu) / sq(rho1));
        CHECK(opt.x0 >= 0.0);
        CHECK(opt.x0 <= xm);
        CHECK(opt.bound == doctest::Approx(oracle::ab_objective(rho1, mu, e, opt.x0)));
        CHECK(opt.bound >= oracle::ab_grid_max(rho1, mu, e, 20001) - 1e-12);
        if (e >= 0.0) {
            const double gs = oracle::golden_max([&](double x) { return oracle::ab_objective(rho1, mu, e, x); }, 0.0, xm);
            CHECK(opt.bound >= oracle::ab_objective(rho1, mu, e, gs) - 1e-12);
        }
    }
    // with e = 1 - 2 rho1^2 (|rho_2| = 0) the optimum is the closed form
    for (int i = 0; i < 300; ++i) {
        const double rho1 = std::sqrt(0.5) * (0.05 + 0.95 * u(rng));
        const double mu = 0.75 + 0.25 * u(rng);
        try {
            const auto l = lemma3_x0star(rho1, mu);
            CHECK(optimal_x0(rho1, mu, 1 - 2 * rho1 * rho1).x0 == doctest::Approx(l.x0_star).epsilon(1e-9));
        } catch (const CertificateInapplicable&) {
        }
    }
}

TEST_CASE("verdict and chain")
{
    const auto t = theorem1_verdict(0.76);
    CHECK(t.verdict == Theorem1Verdict::all_in_phase_forced);
    CHECK(t.rho2_lower == 0.5);
    CHECK(t.rho1_sq_lower >= 0.125);
    CHECK(t.corollary_threshold_sq == doctest::Approx(0.1152));
    CHECK(t.chain_holds);
    CHECK(theorem1_verdict(0.75).verdict == Theorem1Verdict::inconclusive);
    CHECK(theorem1_verdict(0.6).verdict == Theorem1Verdict::inconclusive);
    CHECK(theorem1_verdict(Rational{3, 4}).verdict == Theorem1Verdict::inconclusive);
    CHECK(theorem1_verdict(Rational{16, 21}).verdict == Theorem1Verdict::all_in_phase_forced);
    CHECK_THROWS_AS((void)theorem1_verdict(0.0), DomainError);
    CHECK_THROWS_AS((void)theorem1_verdict(Rational{5, 4}), DomainError);
    for (int i = 1; i <= 1000; ++i) {
        const double mu = 0.75 + 0.25 * i / 1000.0;
        CHECK(theorem1_verdict(mu).chain_holds);
    }
}

TEST_CASE("near-incoherent non-edge average")
{
    // clusters of two at 0, pi/2, pi, 3pi/2; each node misses only the antipodal cluster
    const std::size_t n = 8;
    std::vector<double> th(n);
    for (std::size_t j = 0; j < n; ++j) th[j] = (j / 2) * pi / 2;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k)
            if ((k / 2 + 4 - j / 2) % 4 != 2) edges.emplace_back(j, k);
    const auto g = Graph::from_edges(n, edges);
    const PhaseState s(th);
    const auto r = eq14_check(g, s);
    CHECK(r.lhs_normalized == doctest::Approx(oracle::nonedge_cos_minus_cos2(dense(g), vec(s)) / 64.0));
    CHECK(r.lhs_normalized == doctest::Approx(-0.5));
    CHECK(r.abs_threshold == -0.49900);
    CHECK(r.mu_threshold == doctest::Approx(-1.9921 * 0.25));
    CHECK(r.holds());

    CHECK_THROWS_AS((void)eq14_check(cycle_graph(5), PhaseState::twisted(5, 1)), CertificateInapplicable);
    CHECK_THROWS_AS((void)eq14_check(complete_graph(5), PhaseState::all_in_phase(5)), CertificateInapplicable);
    CHECK_NOTHROW((void)eq14_evaluate(complete_graph(5), PhaseState::all_in_phase(5)));
}

TEST_CASE("soundness on every stable twisted state of small circulants")
{
    std::size_t stable_seen = 0;
    for (std::size_t n = 5; n <= 60; n += (n < 24 ? 1 : 6)) {
        for (std::size_t d = 2; d < n; d += 1 + n / 12) {
            std::size_t per_degree = 0;
            for_each_circulant(n, d, [&](const std::vector<std::size_t>& offsets) {
                const auto g = circulant(n, offsets);
                for (std::size_t q = 0; q <= n / 2; ++q) {
                    const auto s = refine_equilibrium(g, PhaseState::twisted(n, static_cast<long>(q)));
                    if (spectrum(g, s).classification != Stability::stable) continue;
                    ++stable_seen;
                    const auto rep = certify(g, s);
                    INFO("n=", n, " q=", q);
                    CHECK(rep.equilibrium_conditions_hold());
                    CHECK(rep.stability_conditions_hold());
                    CHECK(rep.lxb_value <= 1e-9 * n * n);
                    CHECK(rep.lemma1_violations == 0);
                    if (q != 0) CHECK(rep.theorem1_verdict == Theorem1Verdict::inconclusive);
                }
                return ++per_degree < 4;
            });
        }
    }
    CHECK(stable_seen > 100);
}

TEST_CASE("equilibrium conditions hold at unstable equilibria too")
{
    for (std::size_t n : {6UL, 9UL, 14UL}) {
        const auto g = add_self_loops(circulant(n, {1, 2}));
        for (std::size_t q = 1; q <= n / 2; ++q) {
            const auto s = PhaseState::twisted(n, static_cast<long>(q));
            const auto rep = certify(g, s);
            CHECK(rep.equilibrium_conditions_hold());
            if (spectrum(g, s).classification == Stability::unstable) continue;
            CHECK(rep.stability_conditions_hold());
        }
    }
}

TEST_CASE("report json carries every field")
{
    const auto j = to_json(certify(cycle_graph(5), PhaseState::twisted(5, 1)));
    for (const char* key : {"lxb_value", "eq5_lhs", "eq5_rhs", "eq6_slack", "eq9_slack", "eq10_slack",
                            "lemma1_violations", "eq8_max", "corollary1_applies", "theorem1_verdict"})
        CHECK(j.contains(key));
    CHECK(j["theorem1_verdict"] == "inconclusive");
}

}
