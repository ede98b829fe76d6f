#include <doctest.h>
#include <omp.h>

#include <set>
#include <sstream>

#include "kuramoto/dynamics.hpp"
#include "kuramoto/errors.hpp"
#include "kuramoto/harness.hpp"
#include "kuramoto/moments.hpp"
#include "kuramoto/rng.hpp"
#include "oracles.hpp"

using namespace kuramoto;

TEST_SUITE("harness") {

TEST_CASE("counter rng is a pure function of (seed, stream, counter)")
{
    CounterRng a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        CHECK(x == CounterRng(7, 3).at(static_cast<std::uint64_t>(i)));
        CHECK(x != c.next());
        CHECK(x != d.next());
    }
    CounterRng u(1, 1);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double v = u.uniform();
        CHECK_UNARY(v >= 0.0 && v < 1.0);
        sum += v;
    }
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
    CHECK(random_state(5, 9, 2) == random_state(5, 9, 2));
    CHECK_FALSE(random_state(5, 9, 2) == random_state(5, 9, 3));
}

TEST_CASE("wilson interval")
{
    const auto full = wilson_interval(100, 100);
    CHECK(full.high == doctest::Approx(1.0));
    CHECK(full.low == doctest::Approx(0.963005).epsilon(1e-5));
    const auto half = wilson_interval(50, 100);
    CHECK(half.low == doctest::Approx(0.403832).epsilon(1e-5));
    CHECK(half.high == doctest::Approx(0.596168).epsilon(1e-5));
    const auto none = wilson_interval(0, 10);
    CHECK(none.low == 0.0);
}

TEST_CASE("complete graph always synchronises")
{
    const auto est = run_basin(complete_graph(6), 100, 1);
    CHECK(est.synced == 100);
    CHECK(est.fraction == 1.0);
    CHECK(est.unresolved == 0);
    for (const auto& o : est.outcomes) CHECK(o.final_rho1 > 1 - 1e-6);
}

TEST_CASE("basin runs are reproducible")
{
    BasinOptions o;
    o.keep_final_states = true;
    const auto a = run_basin(cycle_graph(5), 60, 99, o);
    const auto b = run_basin(cycle_graph(5), 60, 99, o);
    CHECK(a.synced == b.synced);
    CHECK(a.final_states == b.final_states);
    CHECK(to_json(a, true).dump() == to_json(b, true).dump());
    CHECK(a.synced > 0);
    CHECK(a.synced < 60);
    CHECK_THROWS_AS((void)run_basin(cycle_graph(5), 0, 1), DomainError);
}

TEST_CASE("circulant enumeration matches brute force")
{
    for (std::size_t n = 3; n <= 14; ++n) {
        for (std::size_t d = 1; d < n; ++d) {
            std::set<std::vector<std::size_t>> seen;
            std::vector<std::size_t> last;
            for_each_circulant(n, d, [&](const std::vector<std::size_t>& offs) {
                CHECK(circulant(n, offs).degree(0) == d);
                if (!last.empty()) CHECK(last < offs);
                last = offs;
                seen.insert(offs);
                return true;
            });
            // brute force over subsets of 1..n/2
            std::size_t expect = 0;
            const std::size_t half = n / 2;
            for (std::size_t mask = 1; mask < (1UL << half); ++mask) {
                std::size_t deg = 0, g = n;
                for (std::size_t s = 1; s <= half; ++s)
                    if (mask & (1UL << (s - 1))) {
                        deg += (2 * s == n) ? 1 : 2;
                        g = oracle::gcd(g, s);
                    }
                if (deg == d && g == 1) ++expect;
            }
            CHECK(seen.size() == expect);
        }
    }
}

TEST_CASE("closed-form twisted spectrum matches the dense solver")
{
    for (std::size_t n = 5; n <= 16; ++n) {
        for (std::size_t d = 2; d < n; ++d) {
            for_each_circulant(n, d, [&](const std::vector<std::size_t>& offs) {
                const auto g = circulant(n, offs);
                for (std::size_t q = 1; q <= n / 2; ++q) {
                    auto eig = twisted_circulant_eigenvalues(n, offs, q);
                    std::sort(eig.begin(), eig.end());
                    const auto rep = spectrum(g, PhaseState::twisted(n, static_cast<long>(q)));
                    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(eig[i] - rep.eigenvalues[i]) < 1e-9);
                }
                return true;
            });
        }
    }
}

TEST_CASE("pattern search: cycle of five and the guard")
{
    const auto r5 = run_pattern_search(5);
    REQUIRE(r5.best.has_value());
    CHECK(r5.best->offsets == std::vector<std::size_t>{1});
    CHECK(r5.best->q == 1);
    CHECK(r5.best->mu == Rational{1, 2});
    CHECK(r5.best->spectrum.classification == Stability::stable);
    CHECK(r5.complete);
    CHECK_FALSE(r5.guard_violated);
    CHECK_THROWS_AS((void)run_pattern_search(4), DomainError);

    for (std::size_t n = 5; n <= 18; ++n) {
        const auto r = run_pattern_search(n);
        CHECK(r.complete);
        CHECK_FALSE(r.guard_violated);
        REQUIRE(r.best.has_value());
        CHECK(r.best->mu <= sync_sufficient_mu(n));
        CHECK(r.best->certificates.eq10_slack >= -1e-9);
        CHECK(r.best->certificates.stability_conditions_hold());
        // the exhaustive route finds the same graph
        PatternSearchOptions ex;
        ex.exhaustive_spectrum = true;
        const auto e = run_pattern_search(n, ex);
        REQUIRE(e.best.has_value());
        CHECK(e.best->offsets == r.best->offsets);
        CHECK(e.best->q == r.best->q);
    }
    const auto r10 = run_pattern_search(10);
    CHECK(r10.best->mu.value() <= 0.6838);
}

TEST_CASE("pattern search budgets")
{
    PatternSearchOptions o;
    o.budget = 3;
    const auto r = run_pattern_search(20, o);
    CHECK_FALSE(r.complete);
    CHECK(r.offset_sets == 3);
    o.budget = 0;
    o.degree_budget = 1;
    const auto s = run_pattern_search(20, o);
    CHECK_FALSE(s.complete);
    REQUIRE(s.best.has_value()); // a ring of nearest neighbours comes first in every degree
}

TEST_CASE("figure 1 rows")
{
    PatternSearchOptions o;
    o.degree_budget = 200;
    const auto rows = run_figure1(5, 24, o);
    REQUIRE(rows.size() == 20);
    for (const auto& r : rows) {
        CHECK(r.bound == sync_sufficient_mu(r.n));
        REQUIRE(r.pattern_mu.has_value());
        CHECK(*r.pattern_mu <= r.bound); // C5 sits exactly on the bound
        CHECK_FALSE(r.guard_violated);
        CHECK(r.twin_c4_mu.has_value() == (r.n % 4 == 0));
    }
    CHECK(rows[0].bound == Rational{1, 2});
    CHECK(rows[15].n == 20);
    CHECK(rows[15].bound == Rational{14, 19});
    CHECK(*rows[15].twin_c4_mu == Rational{14, 19});
    std::ostringstream os;
    write_figure1_csv(os, rows);
    CHECK(os.str().rfind("n,bound,bound_value,", 0) == 0);
    CHECK_THROWS_AS((void)run_figure1(4, 10), DomainError);
    CHECK_THROWS_AS((void)run_figure1(10, 201), DomainError);
}

TEST_CASE("razor's edge rows")
{
    const auto rows = run_razor_edge(1, 10, 0, 0);
    REQUIRE(rows.size() == 10);
    Rational prev{0, 1};
    for (const auto& r : rows) {
        const auto m = static_cast<std::int64_t>(r.m);
        CHECK(r.connectivity.mu == Rational{3 * m - 1, 4 * m - 1});
        CHECK(r.connectivity.mu > prev);
        CHECK(r.connectivity.mu < Rational{3, 4});
        prev = r.connectivity.mu;
        CHECK(r.residual < 1e-12);
        CHECK(r.spectrum.classification == Stability::marginal);
        CHECK(r.spectrum.zero_multiplicity >= 2);
        CHECK_FALSE(r.basin.has_value());
    }
    CHECK(rows[0].spectrum.zero_multiplicity == 4);
    CHECK(rows[9].connectivity.mu.value() == doctest::Approx(29.0 / 39.0));
    const auto with_basin = run_razor_edge(2, 2, 10, 5);
    REQUIRE(with_basin[0].basin.has_value());
    CHECK(with_basin[0].basin->trials == 10);
    CHECK(to_json(with_basin)["rows"][0]["mu"]["exact"] == "5/7");
}

TEST_CASE("certify driver outcomes")
{
    const auto k8 = run_certify(complete_graph(8), PhaseState::all_in_phase(8, 0.2));
    CHECK(k8.consistent);
    CHECK(k8.certificates.theorem1_verdict == Theorem1Verdict::all_in_phase_forced);
    CHECK(k8.spectrum.classification == Stability::stable);

    const auto c4 = run_certify(add_self_loops(cycle_graph(4)), PhaseState::twisted(4, 1));
    CHECK(c4.spectrum.classification == Stability::marginal);
    REQUIRE(c4.certificates.eq9_slack.has_value());
    CHECK(std::abs(*c4.certificates.eq9_slack) < 1e-12);
    CHECK(c4.consistent);

    const auto k2 = run_certify(add_self_loops(complete_graph(2)), PhaseState({0.0, 3.141592653589793}));
    CHECK(k2.spectrum.classification == Stability::unstable);
    CHECK(k2.certificates.instability_certified());
    CHECK(k2.consistent);

    // a nearly-equilibrium input is refined first
    const auto c5 = run_certify(cycle_graph(5), PhaseState::twisted(5, 1).shifted(0.1));
    CHECK(c5.residual < 1e-12);
    CHECK(c5.spectrum.classification == Stability::stable);
    CHECK(c5.consistent);
    const auto j = to_json(c5);
    CHECK(j["consistent"] == true);
    CHECK(j["spectrum"]["classification"] == "stable");

    CHECK_THROWS_AS((void)run_certify(cycle_graph(5), PhaseState::all_in_phase(4)), DomainError);
}

TEST_CASE("graph descriptors and state files")
{
    CHECK(graph_from_descriptor("complete:5") == complete_graph(5));
    CHECK(graph_from_descriptor("complete:5+loops") == complete_graph(5, true));
    CHECK(graph_from_descriptor("cycle:7") == cycle_graph(7));
    CHECK(graph_from_descriptor("circulant:10:1,5") == circulant(10, {1, 5}));
    CHECK(graph_from_descriptor("twin-c4:3") == twin(cycle_graph(4), 3));
    CHECK(graph_from_descriptor("cycle:4+loops").self_loops());
    CHECK_THROWS_AS((void)graph_from_descriptor("cycle"), ParseError);
    CHECK_THROWS_AS((void)graph_from_descriptor("star:5"), ParseError);
    CHECK_THROWS_AS((void)graph_from_descriptor("cycle:x"), ParseError);
    CHECK_THROWS_AS((void)graph_from_descriptor("circulant:10"), ParseError);

    const auto s = PhaseState::twisted(6, 1);
    std::stringstream ss;
    write_state(ss, s);
    CHECK(read_state(ss) == s);
    std::istringstream in("# two phases\n0.5  1.5 # trailing\n\n");
    CHECK(read_state(in) == PhaseState({0.5, 1.5}));
    std::istringstream bad("0.5 abc\n");
    CHECK_THROWS_AS((void)read_state(bad), ParseError);
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS((void)read_state(empty), ParseError);
    CHECK_THROWS_AS((void)load_state("/nonexistent/state.txt"), ParseError);
}

TEST_CASE("experiment output does not depend on the thread count")
{
    BasinOptions o;
    o.keep_final_states = true;
    PatternSearchOptions po;
    po.degree_budget = 50;
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto a = to_json(run_basin(cycle_graph(7), 40, 11, o), true).dump();
    std::ostringstream fa;
    write_figure1_csv(fa, run_figure1(5, 16, po));
    omp_set_num_threads(3);
    const auto b = to_json(run_basin(cycle_graph(7), 40, 11, o), true).dump();
    std::ostringstream fb;
    write_figure1_csv(fb, run_figure1(5, 16, po));
    omp_set_num_threads(saved);
    CHECK(a == b);
    CHECK(fa.str() == fb.str());
}

}
