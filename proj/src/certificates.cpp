#include "kuramoto/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "kuramoto/dynamics.hpp"
#include "kuramoto/errors.hpp"
#include "kuramoto/moments.hpp"

namespace kuramoto {

namespace {

void check_sizes(const Graph& g, const PhaseState& s)
{
    if (g.size() != s.size()) throw DomainError("certificate: state and graph sizes differ");
}

struct PairSums {
    double edge_cos = 0.0;        // sum_{j != k} A_jk cos d_jk
    double edge_cos2 = 0.0;       // sum_{j != k} A_jk cos^2 d_jk
    double nonedge_excess = 0.0;  // sum_{j != k} (1 - A_jk)(cos d_jk - cos^2 d_jk)
};

// Diagonal pairs contribute cos - cos^2 = 0 to every sum that matters here,
// with or without self-loops, so they are skipped.
PairSums pair_sums(const Graph& g, const PhaseState& s)
{
    const auto n = g.size();
    const auto th = s.theta();
    PairSums out;
    for (std::size_t j = 0; j < n; ++j) {
        const auto row = g.row(j);
        double ec = 0.0, ec2 = 0.0, ne = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == j) continue;
            const double c = std::cos(th[k] - th[j]);
            if (row[k]) {
                ec += c;
                ec2 += c * c;
            } else {
                ne += c - c * c;
            }
        }
        out.edge_cos += ec;
        out.edge_cos2 += ec2;
        out.nonedge_excess += ne;
    }
    return out;
}

double mu_tilde_of(const Graph& g)
{
    return connectivity(g).mu_tilde.value();
}

struct NormalizedMoments {
    PhaseState state; // rotated so that rho_1 is real, >= 0
    double rho1 = 0.0;
    double rho2_abs = 0.0;
};

NormalizedMoments normalized_moments(const PhaseState& s)
{
    auto norm = normalize_phase(s);
    const double rho1 = std::abs(moment(norm.state, 1));
    const double rho2 = std::abs(moment(norm.state, 2));
    return {std::move(norm.state), rho1, rho2};
}

double sqr(double x)
{
    return x * x;
}

} // namespace

double lxb_stability_value(const Graph& g, const PhaseState& s)
{
    check_sizes(g, s);
    const auto sums = pair_sums(g, s);
    return -sums.edge_cos + sums.edge_cos2;
}

Eq5Sides eq5_check(const Graph& g, const PhaseState& s)
{
    check_sizes(g, s);
    const auto sums = pair_sums(g, s);
    const double n = static_cast<double>(g.size());
    const double rho1 = std::abs(moment(s, 1));
    const double rho2 = std::abs(moment(s, 2));
    return {sums.nonedge_excess, 0.5 * n * n * (2.0 * rho1 * rho1 - rho2 * rho2 - 1.0)};
}

double eq6_slack(const Graph& g, const PhaseState& s)
{
    check_sizes(g, s);
    const auto sums = pair_sums(g, s);
    const double n = static_cast<double>(g.size());
    const double rho1 = std::abs(moment(s, 1));
    const double rho2 = std::abs(moment(s, 2));
    return rho1 * rho1 - (0.5 * (1.0 + rho2 * rho2) + sums.nonedge_excess / (n * n));
}

Lemma1Result lemma1_check(const Graph& g, const PhaseState& s, std::size_t j)
{
    check_sizes(g, s);
    const auto n = g.size();
    if (j >= n) throw DomainError("lemma1_check: index out of range");
    const double mu_tilde = mu_tilde_of(g);
    const auto nm = normalized_moments(s);
    const auto th = nm.state.theta();

    Lemma1Result r;
    r.radicand = sqr(1.0 - mu_tilde) - sqr(nm.rho1 * std::sin(th[j]));
    r.lhs = static_cast<double>(n) * std::sqrt(std::max(0.0, r.radicand));
    const auto row = g.row(j);
    for (std::size_t k = 0; k < n; ++k)
        if (k != j && !row[k]) r.mid += std::abs(std::cos(th[k] - th[j]));
    r.eq8_holds = r.radicand >= -radicand_tol;
    r.cosine_bound_holds = r.lhs >= r.mid - certificate_tol * static_cast<double>(n);
    return r;
}

double eq8_max(const PhaseState& s, double mu_tilde)
{
    const auto nm = normalized_moments(s);
    double worst = 0.0;
    for (auto t : nm.state.theta()) worst = std::max(worst, nm.rho1 * std::abs(std::sin(t)));
    return worst - (1.0 - mu_tilde);
}

bool corollary1_applies(double rho1, double mu_tilde)
{
    return rho1 > std::numbers::sqrt2 * (1.0 - mu_tilde);
}

Corollary1Result corollary1_check(const PhaseState& s, double mu_tilde)
{
    const auto nm = normalized_moments(s);
    Corollary1Result r;
    r.applies = corollary1_applies(nm.rho1, mu_tilde);
    for (auto t : nm.state.theta()) r.max_abs_sin = std::max(r.max_abs_sin, std::abs(std::sin(t)));
    return r;
}

double eq9_slack(const PhaseState& s, double mu_tilde)
{
    const auto nm = normalized_moments(s);
    const double c = sqr(1.0 - mu_tilde);
    double root_sum = 0.0;
    for (auto t : nm.state.theta()) {
        const double rad = c - sqr(nm.rho1 * std::sin(t));
        if (rad < -radicand_tol)
            throw CertificateInapplicable("eq9_slack: radicand " + std::to_string(rad) +
                                          " is negative, the per-oscillator bound already fails");
        root_sum += std::sqrt(std::max(0.0, rad));
    }
    const double n = static_cast<double>(s.size());
    return sqr(nm.rho1) - (0.5 * (1.0 + sqr(nm.rho2_abs)) - 2.0 / n * root_sum);
}

double eq10_slack(double rho1, double rho2_abs, double mu_tilde)
{
    return rho1 * rho1 - 2.0 * (mu_tilde - 0.75) - 0.5 * rho2_abs * rho2_abs;
}

double eq10_slack(const PhaseState& s, double mu_tilde)
{
    return eq10_slack(std::abs(moment(s, 1)), std::abs(moment(s, 2)), mu_tilde);
}

double LemmaTwoParams::x_max() const
{
    return std::min(1.0, sqr(1.0 - mu_tilde) / sqr(rho1));
}

double LemmaTwoParams::radicand(double x) const
{
    return sqr(1.0 - mu_tilde) - sqr(rho1) * x;
}

double LemmaTwoParams::g(double x) const
{
    return a + 4.0 * b * std::sqrt(std::max(0.0, radicand(x)));
}

double LemmaTwoParams::g_prime(double x) const
{
    const double r = radicand(x);
    if (r <= 0.0) {
        if (x == x0) return -2.0;
        return -std::numeric_limits<double>::infinity();
    }
    return -2.0 * sqr(rho1) * b / std::sqrt(r);
}

LemmaTwoParams lemma2_params(double rho1, double mu_tilde, double x0)
{
    if (!(rho1 > 0.0)) throw DomainError("lemma2_params: rho1 must be positive");
    LemmaTwoParams p;
    p.rho1 = rho1;
    p.mu_tilde = mu_tilde;
    p.x0 = x0;
    if (!(x0 >= 0.0 && x0 <= p.x_max())) throw DomainError("lemma2_params: x0 outside [0, min(1, (1-mu)^2/rho1^2)]");
    const double c = sqr(1.0 - mu_tilde);
    const double r2 = sqr(rho1);
    p.a = 1.0 + 2.0 * x0 - 4.0 * c / r2;
    p.b = std::sqrt(std::max(0.0, c - r2 * x0)) / r2;
    return p;
}

LemmaThreeResult lemma3_x0star(double rho1, double mu_tilde)
{
    if (!(rho1 > 0.0)) throw CertificateInapplicable("lemma3_x0star: rho1 must be positive");
    const double r2 = sqr(rho1);
    double d = 1.0 - 2.0 * r2;
    if (d < -radicand_tol) throw CertificateInapplicable("lemma3_x0star: needs 1 - 2 rho1^2 >= 0");
    d = std::max(d, 0.0);
    const double c = sqr(1.0 - mu_tilde);
    const double x_star = c / r2 - d * d / (16.0 * r2);
    const double x_max = std::min(1.0, c / r2);
    if (x_star < 0.0) throw CertificateInapplicable("lemma3_x0star: x0* < 0, i.e. rho1^2 < 2(mu_tilde - 3/4)");
    if (x_star > x_max) throw CertificateInapplicable("lemma3_x0star: x0* beyond the admissible range");
    return {x_star, 1.0 - 2.0 * x_star};
}

X0Optimum optimal_x0(double rho1, double mu_tilde, double e)
{
    if (!(rho1 > 0.0)) throw DomainError("optimal_x0: rho1 must be positive");
    const double c = sqr(1.0 - mu_tilde);
    const double r2 = sqr(rho1);
    const double x_max = std::min(1.0, c / r2);
    auto objective = [&](double x0) {
        const double a = 1.0 + 2.0 * x0 - 4.0 * c / r2;
        const double b = std::sqrt(std::max(0.0, c - r2 * x0)) / r2;
        return a + b * e;
    };
    if (e >= 0.0) {
        const double x0 = std::clamp((c - e * e / 16.0) / r2, 0.0, x_max);
        return {x0, objective(x0)};
    }
    const double lo = objective(0.0);
    const double hi = objective(x_max);
    return lo >= hi ? X0Optimum{0.0, lo} : X0Optimum{x_max, hi};
}

std::string_view to_string(Theorem1Verdict v) noexcept
{
    return v == Theorem1Verdict::all_in_phase_forced ? "all_in_phase_forced" : "inconclusive";
}

namespace {

Theorem1Chain theorem1_chain(double mu_tilde, bool forced)
{
    Theorem1Chain t;
    t.corollary_threshold_sq = 2.0 * sqr(1.0 - mu_tilde);
    if (!forced) return t;
    t.verdict = Theorem1Verdict::all_in_phase_forced;
    t.rho2_lower = 0.5;
    t.rho1_sq_lower = 2.0 * (mu_tilde - 0.75) + 0.5 * sqr(t.rho2_lower);
    t.chain_holds = t.rho1_sq_lower >= 0.125 && 0.125 > t.corollary_threshold_sq;
    return t;
}

} // namespace

Theorem1Chain theorem1_verdict(double mu_tilde)
{
    if (!(mu_tilde > 0.0 && mu_tilde <= 1.0)) throw DomainError("theorem1_verdict: mu_tilde must lie in (0, 1]");
    return theorem1_chain(mu_tilde, mu_tilde > 0.75);
}

Theorem1Chain theorem1_verdict(const Rational& mu_tilde)
{
    if (mu_tilde.num <= 0 || mu_tilde.num > mu_tilde.den) throw DomainError("theorem1_verdict: mu_tilde must lie in (0, 1]");
    return theorem1_chain(mu_tilde.value(), 4 * mu_tilde.num > 3 * mu_tilde.den);
}

Eq14Result eq14_evaluate(const Graph& g, const PhaseState& s)
{
    check_sizes(g, s);
    const double n = static_cast<double>(g.size());
    Eq14Result r;
    r.lhs_normalized = pair_sums(g, s).nonedge_excess / (n * n);
    r.mu_threshold = eq14_mu_coefficient * (1.0 - mu_tilde_of(g));
    return r;
}

Eq14Result eq14_check(const Graph& g, const PhaseState& s)
{
    check_sizes(g, s);
    const double rho1 = std::abs(moment(s, 1));
    const double rho2 = std::abs(moment(s, 2));
    const double mu_tilde = mu_tilde_of(g);
    if (!(rho1 < case_ii_rho1 && rho2 < case_ii_rho2 && mu_tilde >= case_ii_mu_tilde))
        throw CertificateInapplicable("eq14_check: state is outside the near-incoherent regime");
    return eq14_evaluate(g, s);
}

bool CertificateReport::equilibrium_conditions_hold() const
{
    return lemma1_violations == 0 && eq8_max <= certificate_tol;
}

bool CertificateReport::stability_conditions_hold() const
{
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    return lxb_value <= certificate_tol * n2 && eq5_lhs <= eq5_rhs + certificate_tol * n2 &&
           eq6_slack >= -certificate_tol && eq9_slack.has_value() && *eq9_slack >= -certificate_tol &&
           eq10_slack >= -certificate_tol && (!corollary1_applies || corollary1_sin_bound);
}

CertificateReport certify(const Graph& g, const PhaseState& s)
{
    check_sizes(g, s);
    CertificateReport r;
    r.n = g.size();
    const auto conn = connectivity(g);
    r.mu_tilde = conn.mu_tilde.value();
    const auto nm = normalized_moments(s);
    r.rho1 = nm.rho1;
    r.rho2_abs = nm.rho2_abs;

    const auto sums = pair_sums(g, nm.state);
    const double n = static_cast<double>(r.n);
    r.lxb_value = -sums.edge_cos + sums.edge_cos2;
    r.eq5_lhs = sums.nonedge_excess;
    r.eq5_rhs = 0.5 * n * n * (2.0 * sqr(r.rho1) - sqr(r.rho2_abs) - 1.0);
    r.eq6_slack = sqr(r.rho1) - (0.5 * (1.0 + sqr(r.rho2_abs)) + sums.nonedge_excess / (n * n));
    try {
        r.eq9_slack = eq9_slack(nm.state, r.mu_tilde);
    } catch (const CertificateInapplicable&) {
        r.eq9_slack.reset();
    }
    r.eq10_slack = eq10_slack(r.rho1, r.rho2_abs, r.mu_tilde);
    for (std::size_t j = 0; j < r.n; ++j) {
        const auto l1 = lemma1_check(g, nm.state, j);
        if (!l1.cosine_bound_holds || !l1.eq8_holds) ++r.lemma1_violations;
    }
    r.eq8_max = eq8_max(nm.state, r.mu_tilde);
    const auto cor = corollary1_check(nm.state, r.mu_tilde);
    r.corollary1_applies = cor.applies;
    r.corollary1_sin_bound = cor.sin_bound_holds();
    r.theorem1_verdict = theorem1_verdict(conn.mu_tilde).verdict;
    return r;
}

nlohmann::json to_json(const CertificateReport& r)
{
    nlohmann::json j{
        {"n", r.n},
        {"mu_tilde", r.mu_tilde},
        {"rho1", r.rho1},
        {"rho2_abs", r.rho2_abs},
        {"lxb_value", r.lxb_value},
        {"eq5_lhs", r.eq5_lhs},
        {"eq5_rhs", r.eq5_rhs},
        {"eq6_slack", r.eq6_slack},
        {"eq10_slack", r.eq10_slack},
        {"lemma1_violations", r.lemma1_violations},
        {"eq8_max", r.eq8_max},
        {"corollary1_applies", r.corollary1_applies},
        {"corollary1_sin_bound", r.corollary1_sin_bound},
        {"theorem1_verdict", std::string(to_string(r.theorem1_verdict))},
        {"stability_conditions_hold", r.stability_conditions_hold()},
        {"equilibrium_conditions_hold", r.equilibrium_conditions_hold()},
    };
    j["eq9_slack"] = r.eq9_slack ? nlohmann::json(*r.eq9_slack) : nlohmann::json(nullptr);
    return j;
}

} // namespace kuramoto
