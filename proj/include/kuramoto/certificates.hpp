#pragma once

// Numerical evaluation of the chain of necessary conditions for a stable
// equilibrium of the identical-oscillator flow, from the quadratic-form
// bound through the moment inequalities to the mu_tilde > 3/4 verdict.
//
// Conventions: every routine that involves a single phase theta_j measures
// it relative to arg(rho_1), i.e. it behaves as if the state had been passed
// through normalize_phase first. mu_tilde is always the self-loop adjusted
// connectivity (min degree + 1)/n.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "kuramoto/graph.hpp"
#include "kuramoto/phase_state.hpp"
#include "kuramoto/rational.hpp"

namespace kuramoto {

/// Slack allowed on each inequality; scaled by n^2 for double sums and by n
/// for single sums over k.
inline constexpr double certificate_tol = 1e-9;
/// Radicands in [-radicand_tol, 0) are roundoff and clamped to zero.
inline constexpr double radicand_tol = 1e-12;

// Constants of the mu_tilde >= 0.7495 case analysis.
inline constexpr double case_ii_mu_tilde = 0.7495;
inline constexpr double case_ii_rho1 = 0.03166;
inline constexpr double case_ii_rho2 = 0.04474;
inline constexpr double eq14_abs_threshold = -0.49900;
inline constexpr double eq14_mu_coefficient = -1.9921;

/// -sum A_jk cos(d_jk) + sum A_jk cos^2(d_jk), d_jk = theta_k - theta_j.
/// Non-positive at every stable (or marginal) equilibrium.
[[nodiscard]] double lxb_stability_value(const Graph& g, const PhaseState& s);

struct Eq5Sides {
    double lhs = 0.0; ///< sum over non-edges of cos - cos^2
    double rhs = 0.0; ///< (n^2/2)(2 rho_1^2 - |rho_2|^2 - 1)
};
[[nodiscard]] Eq5Sides eq5_check(const Graph& g, const PhaseState& s);

/// rho_1^2 - [(1 + |rho_2|^2)/2 + (1/n^2) sum_{non-edges}(cos - cos^2)].
[[nodiscard]] double eq6_slack(const Graph& g, const PhaseState& s);

struct Lemma1Result {
    double lhs = 0.0;      ///< n sqrt(max(0, (1-mu_tilde)^2 - rho_1^2 sin^2 theta_j))
    double mid = 0.0;      ///< sum_{k != j} (1 - A_jk)|cos(theta_k - theta_j)|
    double radicand = 0.0; ///< (1-mu_tilde)^2 - rho_1^2 sin^2 theta_j, unclamped
    bool cosine_bound_holds = false; ///< lhs >= mid (within n * certificate_tol)
    bool eq8_holds = false;          ///< radicand >= -radicand_tol
};
/// Valid at any equilibrium. Throws DomainError for j out of range.
[[nodiscard]] Lemma1Result lemma1_check(const Graph& g, const PhaseState& s, std::size_t j);

/// max_j rho_1 |sin theta_j| - (1 - mu_tilde); <= 0 at every equilibrium.
[[nodiscard]] double eq8_max(const PhaseState& s, double mu_tilde);

/// rho_1 > sqrt(2)(1 - mu_tilde).
[[nodiscard]] bool corollary1_applies(double rho1, double mu_tilde);

struct Corollary1Result {
    bool applies = false;
    /// max_j |sin theta_j|; when `applies` and the state is stable, < 1/sqrt(2).
    double max_abs_sin = 0.0;
    [[nodiscard]] bool sin_bound_holds() const { return max_abs_sin < 0.70710678118654752; }
};
[[nodiscard]] Corollary1Result corollary1_check(const PhaseState& s, double mu_tilde);

/// rho_1^2 - [(1+|rho_2|^2)/2 - (2/n) sum_j sqrt((1-mu_tilde)^2 - rho_1^2 sin^2 theta_j)].
/// Throws CertificateInapplicable when a radicand is below -radicand_tol.
[[nodiscard]] double eq9_slack(const PhaseState& s, double mu_tilde);

/// rho_1^2 - 2(mu_tilde - 3/4) - |rho_2|^2 / 2.
[[nodiscard]] double eq10_slack(double rho1, double rho2_abs, double mu_tilde);
[[nodiscard]] double eq10_slack(const PhaseState& s, double mu_tilde);

/// Parameters (a, b) making g(x) = a + 4b sqrt((1-mu_tilde)^2 - rho_1^2 x)
/// tangent to f(x) = 1 - 2x at x = x0. By concavity of g, f >= g on the
/// whole admissible range [0, x_max].
struct LemmaTwoParams {
    double rho1 = 0.0;
    double mu_tilde = 0.0;
    double x0 = 0.0;
    double a = 0.0;
    double b = 0.0;

    [[nodiscard]] double x_max() const;
    [[nodiscard]] double radicand(double x) const;
    [[nodiscard]] double f(double x) const { return 1.0 - 2.0 * x; }
    [[nodiscard]] double g(double x) const;
    /// dg/dx; at x0 with a zero radicand, the one-sided limit -2.
    [[nodiscard]] double g_prime(double x) const;
    /// |f(x0) - g(x0)|
    [[nodiscard]] double value_residual() const { return std::abs(f(x0) - g(x0)); }
    /// |f'(x0) - g'(x0)|
    [[nodiscard]] double slope_residual() const { return std::abs(-2.0 - g_prime(x0)); }
};

/// Throws DomainError when rho1 <= 0 or x0 is outside [0, min(1, (1-mu_tilde)^2/rho1^2)].
[[nodiscard]] LemmaTwoParams lemma2_params(double rho1, double mu_tilde, double x0);

struct LemmaThreeResult {
    double x0_star = 0.0;
    double rho2_lower = 0.0; ///< 1 - 2 x0_star
};

/// x0* = (1-mu_tilde)^2/rho1^2 - (1 - 2 rho1^2)^2 / (16 rho1^2), the maximiser of
/// a + b(1 - 2 rho1^2). Throws CertificateInapplicable unless 1 - 2 rho1^2 >= -radicand_tol
/// and x0* lies in [0, min(1, (1-mu_tilde)^2/rho1^2)]. (x0* >= 0 is the same
/// condition as rho1^2 >= 2(mu_tilde - 3/4).)
[[nodiscard]] LemmaThreeResult lemma3_x0star(double rho1, double mu_tilde);

/// max over admissible x0 of a(x0) + b(x0) * e, computed exactly: for e >= 0 the
/// objective is concave with stationary point ((1-mu_tilde)^2 - e^2/16)/rho1^2,
/// clamped to the interval; for e < 0 it is convex and the maximum is at an end.
/// With e = 1 + |rho_2|^2 - 2 rho1^2 this is the sharpest right-hand side of
/// the |rho_2| lower bound.
struct X0Optimum {
    double x0 = 0.0;
    double bound = 0.0;
};
[[nodiscard]] X0Optimum optimal_x0(double rho1, double mu_tilde, double e);

enum class Theorem1Verdict { all_in_phase_forced, inconclusive };
[[nodiscard]] std::string_view to_string(Theorem1Verdict v) noexcept;

/// Verdict plus the numbers of the implication chain
/// |rho_2| >= 1/2  =>  rho_1^2 >= 1/8  =>  rho_1 > sqrt(2)(1 - mu_tilde).
struct Theorem1Chain {
    Theorem1Verdict verdict = Theorem1Verdict::inconclusive;
    double rho2_lower = 0.0;           ///< 1/2 when forced
    double rho1_sq_lower = 0.0;        ///< 2(mu_tilde - 3/4) + rho2_lower^2 / 2
    double corollary_threshold_sq = 0.0; ///< 2(1 - mu_tilde)^2
    bool chain_holds = false;          ///< rho1_sq_lower >= 1/8 > corollary_threshold_sq
};
[[nodiscard]] Theorem1Chain theorem1_verdict(double mu_tilde);
/// Exact version: mu_tilde > 3/4 decided in integer arithmetic.
[[nodiscard]] Theorem1Chain theorem1_verdict(const Rational& mu_tilde);

struct Eq14Result {
    double lhs_normalized = 0.0; ///< (1/n^2) sum_{non-edges}(cos - cos^2)
    double abs_threshold = eq14_abs_threshold;
    double mu_threshold = 0.0;   ///< -1.9921 (1 - mu_tilde)
    [[nodiscard]] bool holds() const { return lhs_normalized <= abs_threshold && lhs_normalized <= mu_threshold; }
};
/// Throws CertificateInapplicable outside rho_1 < 0.03166, |rho_2| < 0.04474,
/// mu_tilde >= 0.7495.
[[nodiscard]] Eq14Result eq14_check(const Graph& g, const PhaseState& s);
/// Same without the regime guard, for exploring synthetic states.
[[nodiscard]] Eq14Result eq14_evaluate(const Graph& g, const PhaseState& s);

/// Every certificate evaluated for one (graph, equilibrium) pair.
struct CertificateReport {
    std::size_t n = 0;
    double mu_tilde = 0.0;
    double rho1 = 0.0;
    double rho2_abs = 0.0;

    double lxb_value = 0.0;
    double eq5_lhs = 0.0;
    double eq5_rhs = 0.0;
    double eq6_slack = 0.0;
    std::optional<double> eq9_slack; ///< empty when some radicand is genuinely negative
    double eq10_slack = 0.0;
    std::size_t lemma1_violations = 0;
    double eq8_max = 0.0;
    bool corollary1_applies = false;
    bool corollary1_sin_bound = true;
    Theorem1Verdict theorem1_verdict = Theorem1Verdict::inconclusive;

    /// Conditions that hold at every equilibrium (the per-node cosine bound and the sine bound it implies).
    [[nodiscard]] bool equilibrium_conditions_hold() const;
    /// Necessary conditions for linear stability, all within tolerance.
    [[nodiscard]] bool stability_conditions_hold() const;
    /// At least one necessary condition for stability fails: the state is
    /// certified unstable without looking at the spectrum.
    [[nodiscard]] bool instability_certified() const { return !stability_conditions_hold(); }
};

/// Evaluate the full chain. The caller is responsible for passing an
/// equilibrium (see refine_equilibrium); nothing here checks the residual.
[[nodiscard]] CertificateReport certify(const Graph& g, const PhaseState& s);

[[nodiscard]] nlohmann::json to_json(const CertificateReport& r);

} // namespace kuramoto
