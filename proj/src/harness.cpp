#include "kuramoto/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "kuramoto/dynamics.hpp"
#include "kuramoto/errors.hpp"
#include "kuramoto/moments.hpp"
#include "kuramoto/rng.hpp"

namespace kuramoto {

namespace {

std::size_t parse_count(std::string_view text, const std::string& context)
{
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty())
        throw ParseError(context + ": expected a non-negative integer, got '" + std::string(text) + "'");
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

nlohmann::json rational_json(const Rational& r)
{
    std::ostringstream os;
    os << r;
    return {{"exact", os.str()}, {"value", r.value()}};
}

} // namespace

Graph graph_from_descriptor(const std::string& descriptor)
{
    std::string_view d = descriptor;
    bool loops = false;
    constexpr std::string_view loop_suffix = "+loops";
    if (d.size() > loop_suffix.size() && d.substr(d.size() - loop_suffix.size()) == loop_suffix) {
        loops = true;
        d.remove_suffix(loop_suffix.size());
    }
    const auto colon = d.find(':');
    if (colon == std::string_view::npos) throw ParseError("graph descriptor '" + descriptor + "' has no ':'");
    const auto kind = d.substr(0, colon);
    const auto rest = d.substr(colon + 1);

    auto finish = [&](Graph g) { return loops ? add_self_loops(g) : g; };

    if (kind == "file") return finish(load_graph(std::string(rest)));
    if (kind == "complete") return complete_graph(parse_count(rest, descriptor), loops);
    if (kind == "cycle") return finish(cycle_graph(parse_count(rest, descriptor)));
    if (kind == "twin-c4") return finish(twin(cycle_graph(4), parse_count(rest, descriptor)));
    if (kind == "circulant") {
        const auto parts = split(rest, ':');
        if (parts.size() != 2) throw ParseError("circulant descriptor must be circulant:N:s1,s2,...");
        const auto n = parse_count(parts[0], descriptor);
        std::vector<std::size_t> offsets;
        for (auto s : split(parts[1], ',')) offsets.push_back(parse_count(s, descriptor));
        return finish(circulant(n, offsets));
    }
    throw ParseError("unknown graph kind '" + std::string(kind) + "'");
}

PhaseState read_state(std::istream& in)
{
    std::vector<double> theta;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::string word;
        while (words >> word) {
            double v = 0.0;
            const auto* end = word.data() + word.size();
            const auto [ptr, ec] = std::from_chars(word.data(), end, v);
            if (ec != std::errc{} || ptr != end)
                throw ParseError("state line " + std::to_string(line_no) + ": bad number '" + word + "'");
            if (!std::isfinite(v)) throw ParseError("state line " + std::to_string(line_no) + ": non-finite phase");
            theta.push_back(v);
        }
    }
    if (theta.empty()) throw ParseError("state file holds no phases");
    return PhaseState(std::move(theta));
}

PhaseState load_state(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open state file '" + path + "'");
    return read_state(in);
}

void write_state(std::ostream& out, const PhaseState& s)
{
    const auto old = out.precision(std::numeric_limits<double>::max_digits10);
    for (double t : s.theta()) out << t << '\n';
    out.precision(old);
}

// ---------------------------------------------------------------- basin

Interval wilson_interval(std::size_t successes, std::size_t trials)
{
    if (trials == 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double denom = 1.0 + z * z / n;
    const double centre = (p + z * z / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

PhaseState random_state(std::size_t n, std::uint64_t seed, std::uint64_t trial)
{
    CounterRng rng(seed, trial);
    std::vector<double> theta(n);
    for (auto& t : theta) t = two_pi * rng.uniform();
    return PhaseState(std::move(theta));
}

namespace {

TrialOutcome run_trial(const Graph& g, PhaseState& s, const BasinOptions& opts)
{
    IntegratorOptions io;
    io.dt = opts.dt;
    io.record_stride = 0;
    io.stop_residual = opts.stop_residual;

    TrialOutcome out;
    double t = 0.0;
    for (;;) {
        const double span = std::min(opts.check_interval, opts.t_end - t);
        const auto traj = integrate(g, s, span, io);
        s = traj.final_state();
        t += traj.stopped_early ? traj.times.back() : span;
        out.final_residual = traj.final_residual;
        out.final_rho1 = std::abs(moment(s, 1));
        if (traj.stopped_early || out.final_residual < opts.stop_residual) {
            out.resolved = true;
            out.synced = out.final_rho1 > opts.sync_rho1;
            break;
        }
        if (t >= opts.t_end * (1.0 - 1e-12)) break;
    }
    out.time = t;
    return out;
}

} // namespace

BasinEstimate run_basin(const Graph& g, std::size_t trials, std::uint64_t seed, const BasinOptions& opts,
                        std::string graph_id)
{
    if (trials == 0) throw DomainError("run_basin: trials must be >= 1");
    if (!(opts.t_end > 0.0 && opts.dt > 0.0 && opts.check_interval > 0.0))
        throw DomainError("run_basin: t_end, dt and check_interval must be positive");

    BasinEstimate est;
    est.graph_id = std::move(graph_id);
    est.trials = trials;
    est.outcomes.resize(trials);
    if (opts.keep_final_states) est.final_states.resize(trials);
    const auto n = g.size();

#pragma omp parallel for schedule(dynamic, 1)
    for (long tt = 0; tt < static_cast<long>(trials); ++tt) {
        const auto slot = static_cast<std::size_t>(tt);
        auto s = random_state(n, seed, static_cast<std::uint64_t>(tt));
        est.outcomes[slot] = run_trial(g, s, opts);
        if (opts.keep_final_states) est.final_states[slot] = std::move(s);
    }

    for (const auto& o : est.outcomes) {
        if (o.synced) ++est.synced;
        if (!o.resolved) ++est.unresolved;
    }
    est.fraction = static_cast<double>(est.synced) / static_cast<double>(trials);
    const auto ci = wilson_interval(est.synced, trials);
    est.wilson_low = ci.low;
    est.wilson_high = ci.high;
    return est;
}

nlohmann::json to_json(const BasinEstimate& b, bool with_outcomes)
{
    nlohmann::json j{{"graph_id", b.graph_id},
                     {"trials", b.trials},
                     {"synced", b.synced},
                     {"unresolved", b.unresolved},
                     {"fraction", b.fraction},
                     {"wilson_interval", {b.wilson_low, b.wilson_high}}};
    if (with_outcomes) {
        auto arr = nlohmann::json::array();
        for (const auto& o : b.outcomes)
            arr.push_back({{"final_rho1", o.final_rho1},
                           {"final_residual", o.final_residual},
                           {"time", o.time},
                           {"synced", o.synced},
                           {"resolved", o.resolved}});
        j["outcomes"] = std::move(arr);
    }
    return j;
}

// ------------------------------------------------------- pattern search

namespace {

class CosTable {
public:
    explicit CosTable(std::size_t n) : n_(n), table_(n)
    {
        for (std::size_t m = 0; m < n; ++m)
            table_[m] = std::cos(two_pi * static_cast<double>(m) / static_cast<double>(n));
    }
    [[nodiscard]] double operator()(std::size_t m) const { return table_[m % n_]; }

private:
    std::size_t n_;
    std::vector<double> table_;
};

// Largest eigenvalue over the non-rotation modes k = 1..n-1, stopping early
// once it exceeds `stop_above`.
double twisted_max_eigenvalue(std::size_t n, const std::vector<std::size_t>& offsets, std::size_t q,
                              const CosTable& cos_of, double stop_above)
{
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < n; ++k) {
        double lambda = 0.0;
        for (auto s : offsets) {
            const double w = (2 * s == n) ? 1.0 : 2.0;
            lambda += w * cos_of(q * s) * (cos_of(k * s) - 1.0);
        }
        worst = std::max(worst, lambda);
        if (worst > stop_above) break;
    }
    return worst;
}

constexpr double screen_tol = 1e-9;

} // namespace

std::vector<double> twisted_circulant_eigenvalues(std::size_t n, const std::vector<std::size_t>& offsets, std::size_t q)
{
    const CosTable cos_of(n);
    std::vector<double> eig(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double lambda = 0.0;
        for (auto s : offsets) {
            const double w = (2 * s == n) ? 1.0 : 2.0;
            lambda += w * cos_of(q * s) * (cos_of(k * s) - 1.0);
        }
        eig[k] = lambda;
    }
    return eig;
}

PatternSearchResult run_pattern_search(std::size_t n, const PatternSearchOptions& opts)
{
    if (n < 5) throw DomainError("run_pattern_search: n must be >= 5");
    PatternSearchResult result;
    result.n = n;
    const CosTable cos_of(n);
    const auto start = std::min(opts.start_degree.value_or(n - 1), n - 1);

    bool out_of_budget = false;
    for (std::size_t degree = start; degree >= 2 && !result.best && !out_of_budget; --degree) {
        std::size_t at_degree = 0;
        for_each_circulant(n, degree, [&](const std::vector<std::size_t>& offsets) {
            if (opts.budget != 0 && result.offset_sets >= opts.budget) {
                out_of_budget = true;
                result.complete = false;
                return false;
            }
            if (opts.degree_budget != 0 && at_degree >= opts.degree_budget) {
                result.complete = false;
                return false;
            }
            ++result.offset_sets;
            ++at_degree;

            std::optional<Graph> g;
            for (std::size_t q = 1; q <= n / 2; ++q) {
                if (!opts.exhaustive_spectrum && twisted_max_eigenvalue(n, offsets, q, cos_of, screen_tol) > screen_tol)
                    continue;
                if (!g) g.emplace(circulant(n, offsets));
                ++result.states_classified;
                const auto state = refine_equilibrium(*g, PhaseState::twisted(n, static_cast<long>(q)));
                auto spec = spectrum(*g, state);
                if (spec.classification != Stability::stable) continue;

                const auto conn = connectivity(*g);
                PatternRecord rec;
                rec.n = n;
                rec.offsets = offsets;
                rec.degree = degree;
                rec.mu = conn.mu;
                rec.mu_tilde = conn.mu_tilde;
                rec.q = q;
                rec.state = normalize_phase(state).state;
                rec.spectrum = std::move(spec);
                rec.certificates = certify(*g, rec.state);
                result.guard_violated = rec.mu > sync_sufficient_mu(n);
                result.best = std::move(rec);
                return false;
            }
            return true;
        });
        if (degree == 2) break;
    }
    return result;
}

nlohmann::json to_json(const PatternSearchResult& r)
{
    nlohmann::json j{{"n", r.n},
                     {"complete", r.complete},
                     {"offset_sets", r.offset_sets},
                     {"states_classified", r.states_classified},
                     {"guard_violated", r.guard_violated}};
    if (r.best) {
        const auto& b = *r.best;
        j["best"] = {{"offsets", b.offsets},
                     {"degree", b.degree},
                     {"mu", rational_json(b.mu)},
                     {"mu_tilde", rational_json(b.mu_tilde)},
                     {"q", b.q},
                     {"state", std::vector<double>(b.state.theta().begin(), b.state.theta().end())},
                     {"spectrum", to_json(b.spectrum)},
                     {"certificates", to_json(b.certificates)}};
    } else {
        j["best"] = nullptr;
    }
    return j;
}

// -------------------------------------------------------------- figure 1

std::vector<Figure1Row> run_figure1(std::size_t n_min, std::size_t n_max, const PatternSearchOptions& opts)
{
    if (n_min < 5 || n_max > 200 || n_min > n_max) throw DomainError("run_figure1: n range must lie within [5, 200]");
    std::vector<Figure1Row> rows(n_max - n_min + 1);

#pragma omp parallel for schedule(dynamic, 1)
    for (long ii = 0; ii < static_cast<long>(rows.size()); ++ii) {
        const auto n = n_min + static_cast<std::size_t>(ii);
        auto& row = rows[static_cast<std::size_t>(ii)];
        row.n = n;
        row.bound = sync_sufficient_mu(n);
        const auto search = run_pattern_search(n, opts);
        row.search_complete = search.complete;
        row.guard_violated = search.guard_violated;
        if (search.best) {
            row.pattern_mu = search.best->mu;
            row.pattern_q = search.best->q;
            row.pattern_offsets = search.best->offsets;
        }
        if (n % 4 == 0) {
            const auto m = static_cast<std::int64_t>(n / 4);
            row.twin_c4_mu = Rational{3 * m - 1, 4 * m - 1};
        }
    }
    return rows;
}

void write_figure1_csv(std::ostream& out, const std::vector<Figure1Row>& rows)
{
    const auto old = out.precision(std::numeric_limits<double>::max_digits10);
    out << "n,bound,bound_value,pattern_mu,pattern_mu_value,pattern_q,pattern_offsets,search_complete,twin_c4_mu,"
           "twin_c4_mu_value\n";
    for (const auto& r : rows) {
        out << r.n << ',' << r.bound << ',' << r.bound.value() << ',';
        if (r.pattern_mu)
            out << *r.pattern_mu << ',' << r.pattern_mu->value() << ',' << *r.pattern_q << ',';
        else
            out << ",,,";
        for (std::size_t i = 0; i < r.pattern_offsets.size(); ++i) out << (i ? " " : "") << r.pattern_offsets[i];
        out << ',' << (r.search_complete ? 1 : 0) << ',';
        if (r.twin_c4_mu)
            out << *r.twin_c4_mu << ',' << r.twin_c4_mu->value();
        else
            out << ',';
        out << '\n';
    }
    out.precision(old);
}

// ---------------------------------------------------------- razor's edge

std::vector<RazorEdgeRow> run_razor_edge(std::size_t m_min, std::size_t m_max, std::size_t trials, std::uint64_t seed,
                                         const BasinOptions& basin)
{
    if (m_min < 1 || m_min > m_max) throw DomainError("run_razor_edge: need 1 <= m_min <= m_max");
    const auto parent = PhaseState::twisted(4, 1);
    const auto c4 = cycle_graph(4);
    std::vector<RazorEdgeRow> rows;
    for (auto m = m_min; m <= m_max; ++m) {
        const auto g = twin(c4, m);
        const auto s = PhaseState::inherit(parent, m);
        RazorEdgeRow row;
        row.m = m;
        row.n = g.size();
        row.connectivity = connectivity(g);
        row.residual = residual(g, s);
        row.spectrum = spectrum(g, s);
        if (trials > 0) row.basin = run_basin(g, trials, seed, basin, "twin-c4:" + std::to_string(m));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json to_json(const std::vector<RazorEdgeRow>& rows)
{
    auto arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json j{{"m", r.m},
                         {"n", r.n},
                         {"mu", rational_json(r.connectivity.mu)},
                         {"mu_tilde", rational_json(r.connectivity.mu_tilde)},
                         {"residual", r.residual},
                         {"spectrum", to_json(r.spectrum)}};
        j["basin"] = r.basin ? to_json(*r.basin) : nlohmann::json(nullptr);
        arr.push_back(std::move(j));
    }
    return {{"rows", std::move(arr)}};
}

// --------------------------------------------------------------- certify

CertifyOutcome run_certify(const Graph& g, const PhaseState& s, const CertifyOptions& opts)
{
    if (g.size() != s.size())
        throw DomainError("state has " + std::to_string(s.size()) + " phases, graph has " + std::to_string(g.size()) +
                          " nodes");
    CertifyOutcome out;
    RefineOptions ro;
    ro.tol = opts.refine_tol;
    const auto refined = refine_equilibrium(g, s, ro);
    auto norm = normalize_phase(refined);
    out.state = std::move(norm.state);
    out.rho1_gauge = norm.rho1_gauge;
    out.residual = residual(g, out.state);
    out.connectivity = connectivity(g);
    out.spectrum = spectrum(g, out.state, opts.zero_tol);
    out.certificates = certify(g, out.state);
    out.clusters = cluster_analysis(out.state, out.connectivity.mu_tilde.value());
    if (out.clusters.regime_applies) {
        try {
            out.eq14 = eq14_check(g, out.state);
        } catch (const CertificateInapplicable&) {
        }
    }

    const auto& rep = out.certificates;
    bool ok = rep.equilibrium_conditions_hold();
    if (out.spectrum.classification != Stability::unstable) {
        ok = ok && rep.stability_conditions_hold();
        if (rep.theorem1_verdict == Theorem1Verdict::all_in_phase_forced && rep.rho1 <= 1.0 - 1e-6) ok = false;
    }
    out.consistent = ok;
    return out;
}

nlohmann::json to_json(const CertifyOutcome& c)
{
    nlohmann::json j{{"state", std::vector<double>(c.state.theta().begin(), c.state.theta().end())},
                     {"residual", c.residual},
                     {"rho1_gauge", c.rho1_gauge},
                     {"mu", rational_json(c.connectivity.mu)},
                     {"mu_tilde", rational_json(c.connectivity.mu_tilde)},
                     {"spectrum", to_json(c.spectrum)},
                     {"certificates", to_json(c.certificates)},
                     {"clusters", to_json(c.clusters)},
                     {"instability_certified", c.certificates.instability_certified()},
                     {"consistent", c.consistent}};
    if (c.eq14)
        j["eq14"] = {{"lhs_normalized", c.eq14->lhs_normalized},
                     {"abs_threshold", c.eq14->abs_threshold},
                     {"mu_threshold", c.eq14->mu_threshold},
                     {"holds", c.eq14->holds()}};
    else
        j["eq14"] = nullptr;
    return j;
}

} // namespace kuramoto
