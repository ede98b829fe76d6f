#pragma once

// Experiment drivers behind the kuramoto-certify command line tool.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kuramoto/certificates.hpp"
#include "kuramoto/clusters.hpp"
#include "kuramoto/graph.hpp"
#include "kuramoto/phase_state.hpp"
#include "kuramoto/rational.hpp"
#include "kuramoto/spectral.hpp"

namespace kuramoto {

/// Graph from a short descriptor: `complete:N`, `cycle:N`, `circulant:N:s1,s2,...`,
/// `twin-c4:M`, or `file:PATH`. A trailing `+loops` adds self-loops.
/// Throws ParseError on a malformed descriptor.
[[nodiscard]] Graph graph_from_descriptor(const std::string& descriptor);

/// Whitespace separated phases; `#` starts a comment.
[[nodiscard]] PhaseState read_state(std::istream& in);
[[nodiscard]] PhaseState load_state(const std::string& path);
void write_state(std::ostream& out, const PhaseState& s);

// ---------------------------------------------------------------- basin

struct BasinOptions {
    double t_end = 1e3;
    double dt = 0.01;
    /// A trial ends once the residual (max |rhs_j|) falls below this value.
    double stop_residual = 1e-8;
    /// A settled trial counts as synchronised when rho_1 is above this.
    double sync_rho1 = 1.0 - 1e-6;
    /// Length of each integration chunk between convergence checks.
    double check_interval = 10.0;
    /// Keep every trial's final phases in BasinEstimate::final_states.
    bool keep_final_states = false;
};

struct TrialOutcome {
    double final_rho1 = 0.0;
    double final_residual = 0.0;
    double time = 0.0;
    bool synced = false;
    bool resolved = false; ///< settled at some equilibrium before t_end
};

struct BasinEstimate {
    std::string graph_id;
    std::size_t trials = 0;
    std::size_t synced = 0;
    std::size_t unresolved = 0; ///< counted as not synced
    double fraction = 0.0;
    double wilson_low = 0.0;
    double wilson_high = 0.0;
    std::vector<TrialOutcome> outcomes;
    std::vector<PhaseState> final_states; ///< filled only with keep_final_states
};

/// Wilson score interval for k successes in n trials at 95%.
struct Interval {
    double low = 0.0;
    double high = 0.0;
};
[[nodiscard]] Interval wilson_interval(std::size_t successes, std::size_t trials);

/// Initial phases of one trial: n draws uniform on [0, 2 pi) from stream (seed, trial).
[[nodiscard]] PhaseState random_state(std::size_t n, std::uint64_t seed, std::uint64_t trial);

/// Trials run in parallel; the result depends only on (g, trials, seed, opts).
[[nodiscard]] BasinEstimate run_basin(const Graph& g, std::size_t trials, std::uint64_t seed,
                                      const BasinOptions& opts = {}, std::string graph_id = {});

[[nodiscard]] nlohmann::json to_json(const BasinEstimate& b, bool with_outcomes = false);

// ------------------------------------------------------- pattern search

/// Linearisation eigenvalues of the q-twisted state on C_n(offsets), from
/// the circulant structure of the Jacobian: entry k is
/// sum_s w_s 2 cos(2 pi q s / n) (cos(2 pi k s / n) - 1), w = 1/2 for s = n/2.
[[nodiscard]] std::vector<double> twisted_circulant_eigenvalues(std::size_t n, const std::vector<std::size_t>& offsets,
                                                                std::size_t q);

struct PatternSearchOptions {
    /// Offset sets to examine in total; 0 means no limit.
    std::size_t budget = 0;
    /// Offset sets to examine per degree; 0 means no limit.
    std::size_t degree_budget = 0;
    /// Degree to start from (defaults to n - 1).
    std::optional<std::size_t> start_degree;
    /// Skip the closed-form eigenvalue screen and classify every twisted
    /// state by refinement and the dense spectrum.
    bool exhaustive_spectrum = false;
};

struct PatternRecord {
    std::size_t n = 0;
    std::vector<std::size_t> offsets;
    std::size_t degree = 0;
    Rational mu;
    Rational mu_tilde;
    std::size_t q = 0;
    PhaseState state;
    SpectrumReport spectrum;
    CertificateReport certificates;
};

struct PatternSearchResult {
    std::size_t n = 0;
    std::optional<PatternRecord> best;
    bool complete = true;           ///< false when a budget cut the search short
    std::size_t offset_sets = 0;    ///< offset sets examined
    std::size_t states_classified = 0; ///< twisted states sent to the dense spectrum
    /// A stable pattern was found on a graph whose mu exceeds sync_sufficient_mu(n).
    bool guard_violated = false;
};

/// Circulant graphs on n nodes in decreasing degree (lexicographic offsets
/// within a degree); returns the first graph carrying a stable twisted state.
/// Throws DomainError for n < 5.
[[nodiscard]] PatternSearchResult run_pattern_search(std::size_t n, const PatternSearchOptions& opts = {});

/// Calls f(offsets) for every connected circulant offset set of the given
/// degree, in lexicographic order, until f returns false.
template <class F>
void for_each_circulant(std::size_t n, std::size_t degree, F&& f);

[[nodiscard]] nlohmann::json to_json(const PatternSearchResult& r);

// -------------------------------------------------------------- figure 1

struct Figure1Row {
    std::size_t n = 0;
    Rational bound;
    std::optional<Rational> pattern_mu;
    std::optional<std::size_t> pattern_q;
    std::vector<std::size_t> pattern_offsets;
    bool search_complete = true;
    bool guard_violated = false;
    std::optional<Rational> twin_c4_mu; ///< n divisible by 4 only
};

/// Rows for n_min..n_max (within [5, 200]), computed in parallel.
[[nodiscard]] std::vector<Figure1Row> run_figure1(std::size_t n_min, std::size_t n_max,
                                                  const PatternSearchOptions& opts = {});

/// Header: n,bound,bound_value,pattern_mu,pattern_mu_value,pattern_q,pattern_offsets,search_complete,twin_c4_mu,twin_c4_mu_value
void write_figure1_csv(std::ostream& out, const std::vector<Figure1Row>& rows);

// ---------------------------------------------------------- razor's edge

struct RazorEdgeRow {
    std::size_t m = 0;
    std::size_t n = 0;
    Connectivity connectivity;
    double residual = 0.0;
    SpectrumReport spectrum;
    std::optional<BasinEstimate> basin;
};

/// twin(C_4, m) with the inherited quarter-turn twisted state, m = m_min..m_max.
/// Basin sampling is skipped when trials == 0.
[[nodiscard]] std::vector<RazorEdgeRow> run_razor_edge(std::size_t m_min, std::size_t m_max, std::size_t trials,
                                                       std::uint64_t seed, const BasinOptions& basin = {});

[[nodiscard]] nlohmann::json to_json(const std::vector<RazorEdgeRow>& rows);

// --------------------------------------------------------------- certify

struct CertifyOptions {
    double refine_tol = 1e-12;
    std::optional<double> zero_tol;
};

struct CertifyOutcome {
    PhaseState state;        ///< refined and normalised
    double residual = 0.0;
    bool rho1_gauge = true;
    Connectivity connectivity;
    SpectrumReport spectrum;
    CertificateReport certificates;
    ClusterReport clusters;
    std::optional<Eq14Result> eq14;
    /// The certificates agree with the spectral call: a stable or marginal
    /// state passes every necessary condition (and is the all-in-phase state
    /// whenever that is forced), and every equilibrium passes the conditions
    /// valid at all equilibria.
    bool consistent = false;
};

/// Throws RefinementError when Newton does not converge, DomainError on a
/// size mismatch.
[[nodiscard]] CertifyOutcome run_certify(const Graph& g, const PhaseState& s, const CertifyOptions& opts = {});

[[nodiscard]] nlohmann::json to_json(const CertifyOutcome& c);

// ----------------------------------------------------------------- impl

template <class F>
void for_each_circulant(std::size_t n, std::size_t degree, F&& f)
{
    if (n < 3 || degree == 0 || degree >= n) return;
    const bool odd = degree % 2 == 1;
    if (odd && n % 2 == 1) return;
    const std::size_t regular = (n - 1) / 2; // offsets 1..regular contribute 2 each
    const std::size_t pick = degree / 2;
    if (pick > regular) return;

    auto gcd = [](std::size_t a, std::size_t b) {
        while (b != 0) {
            const auto t = a % b;
            a = b;
            b = t;
        }
        return a;
    };

    std::vector<std::size_t> idx(pick);
    for (std::size_t i = 0; i < pick; ++i) idx[i] = i + 1;
    std::vector<std::size_t> offsets;
    for (;;) {
        offsets.assign(idx.begin(), idx.end());
        if (odd) offsets.push_back(n / 2);
        std::size_t g = n;
        for (auto s : offsets) g = gcd(g, s);
        if (g == 1 && !f(static_cast<const std::vector<std::size_t>&>(offsets))) return;

        // next combination of `pick` values from 1..regular
        std::size_t i = pick;
        while (i > 0 && idx[i - 1] == regular - (pick - i)) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t k = i; k < pick; ++k) idx[k] = idx[k - 1] + 1;
    }
}

} // namespace kuramoto
