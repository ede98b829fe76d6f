#include "kuramoto/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "kuramoto/kernels.hpp"
#include "kuramoto/moments.hpp"

namespace kuramoto {

namespace {

void check_sizes(const Graph& g, const PhaseState& s)
{
    if (g.size() != s.size())
        throw DomainError("state has " + std::to_string(s.size()) + " phases but graph has " +
                          std::to_string(g.size()) + " nodes");
}

double inf_norm(std::span<const double> v)
{
    double m = 0.0;
    for (auto x : v) m = std::max(m, std::abs(x));
    return m;
}

// Integrator state shared by both schemes.
class Stepper {
public:
    Stepper(const Graph& g, std::size_t n) : g_(g), n_(n) {}

    double eval(std::span<const double> y, std::vector<double>& k)
    {
        k.resize(n_);
        return kernels::factored_rhs(g_, y, k, ws_);
    }

private:
    const Graph& g_;
    std::size_t n_;
    kernels::FactoredWorkspace ws_;
};

void wrap_all(std::vector<double>& y)
{
    for (auto& t : y) t = wrap_phase(t);
}

struct Recorder {
    Trajectory& traj;
    std::size_t stride;

    void record(double t, const std::vector<double>& y, double e)
    {
        traj.times.push_back(t);
        traj.states.emplace_back(y);
        traj.energies.push_back(e);
    }
};

// Dormand-Prince 5(4) tableau (nodes 0, 1/5, 3/10, 4/5, 8/9, 1, 1).
constexpr std::array<std::array<double, 6>, 7> dp_a{{
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
}};
constexpr std::array<double, 7> dp_err{71.0 / 57600,      0.0,          -71.0 / 16695, 71.0 / 1920,
                                       -17253.0 / 339200, 22.0 / 525.0, -1.0 / 40};

} // namespace

std::vector<double> rhs(const Graph& g, const PhaseState& s)
{
    check_sizes(g, s);
    std::vector<double> out(s.size());
    kernels::pairwise_rhs(g, s.theta(), out);
    return out;
}

double residual(const Graph& g, const PhaseState& s)
{
    return inf_norm(rhs(g, s));
}

double energy(const Graph& g, const PhaseState& s)
{
    check_sizes(g, s);
    return kernels::pairwise_energy(g, s.theta());
}

Trajectory integrate(const Graph& g, const PhaseState& s0, double t_end, const IntegratorOptions& opts)
{
    check_sizes(g, s0);
    if (!(t_end > 0.0)) throw DomainError("integrate: t_end must be positive");
    if (!(opts.dt > 0.0)) throw DomainError("integrate: dt must be positive");
    if (opts.method == IntegratorMethod::dopri45 && !(opts.rtol > 0.0 && opts.atol >= 0.0))
        throw DomainError("integrate: tolerances must be positive");

    const auto n = s0.size();
    Stepper f(g, n);
    Trajectory traj;
    Recorder rec{traj, opts.record_stride};

    std::vector<double> y(s0.theta().begin(), s0.theta().end());
    std::vector<double> k1, tmp(n), ynew(n);
    double t = 0.0;
    double e = f.eval(y, k1);
    rec.record(t, y, e);

    auto finish = [&](bool early) {
        traj.stopped_early = early;
        traj.final_residual = inf_norm(k1);
        if (traj.times.back() != t) rec.record(t, y, e);
        return traj;
    };
    auto accept = [&](double t_next) {
        y.swap(ynew);
        wrap_all(y);
        t = t_next;
        ++traj.steps;
        const double e_next = f.eval(y, k1);
        traj.max_energy_increase = std::max(traj.max_energy_increase, e_next - e);
        e = e_next;
        if (rec.stride != 0 && traj.steps % rec.stride == 0) rec.record(t, y, e);
    };
    auto should_stop = [&]() { return opts.stop_residual > 0.0 && inf_norm(k1) < opts.stop_residual; };

    if (opts.method == IntegratorMethod::rk4) {
        std::vector<double> k2, k3, k4;
        const double raw_steps = std::ceil(t_end / opts.dt - 1e-9);
        const auto total = static_cast<std::size_t>(std::max(1.0, raw_steps));
        for (std::size_t i = 0; i < total; ++i) {
            if (should_stop()) return finish(true);
            const double t0 = static_cast<double>(i) * opts.dt;
            const double t1 = (i + 1 == total) ? t_end : static_cast<double>(i + 1) * opts.dt;
            const double h = t1 - t0;
            for (std::size_t j = 0; j < n; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
            f.eval(tmp, k2);
            for (std::size_t j = 0; j < n; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
            f.eval(tmp, k3);
            for (std::size_t j = 0; j < n; ++j) tmp[j] = y[j] + h * k3[j];
            f.eval(tmp, k4);
            for (std::size_t j = 0; j < n; ++j)
                ynew[j] = y[j] + (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            accept(t1);
        }
        return finish(false);
    }

    // adaptive Dormand-Prince 5(4)
    std::array<std::vector<double>, 7> k;
    double h = std::min(opts.dt, t_end);
    while (t < t_end) {
        if (should_stop()) return finish(true);
        h = std::min(h, t_end - t);
        if (h < opts.min_dt) {
            finish(false);
            throw IntegrationError("integrate: step size underflow at t = " + std::to_string(t), std::move(traj));
        }
        k[0] = k1;
        for (std::size_t stage = 1; stage < 7; ++stage) {
            for (std::size_t j = 0; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t l = 0; l < stage; ++l) acc += dp_a[stage][l] * k[l][j];
                tmp[j] = y[j] + h * acc;
            }
            f.eval(tmp, k[stage]);
            if (stage == 6) ynew = tmp; // row 7 of the tableau is the 5th-order solution
        }
        double err = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double d = 0.0;
            for (std::size_t l = 0; l < 7; ++l) d += dp_err[l] * k[l][j];
            const double scale = opts.atol + opts.rtol * std::max(std::abs(y[j]), std::abs(ynew[j]));
            err = std::max(err, std::abs(h * d) / scale);
        }
        if (!std::isfinite(err)) {
            finish(false);
            throw IntegrationError("integrate: non-finite error estimate", std::move(traj));
        }
        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (err <= 1.0) accept(t + h);
        h *= factor;
    }
    return finish(false);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj)
{
    const auto n = traj.states.empty() ? 0 : traj.states.front().size();
    out << "t";
    for (std::size_t j = 0; j < n; ++j) out << ",theta_" << j;
    out << ",energy,rho1_abs\n";
    const auto old_precision = out.precision(17);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out << traj.times[i];
        for (auto th : traj.states[i].theta()) out << ',' << th;
        out << ',' << traj.energies[i] << ',' << std::abs(moment(traj.states[i], 1)) << '\n';
    }
    out.precision(old_precision);
}

PhaseState refine_equilibrium(const Graph& g, const PhaseState& s0, const RefineOptions& opts)
{
    check_sizes(g, s0);
    const auto n = s0.size();
    const auto ni = static_cast<Eigen::Index>(n);

    PhaseState current = s0;
    auto f = rhs(g, current);
    double res = inf_norm(f);
    if (!std::isfinite(res)) throw RefinementError("refine_equilibrium: non-finite residual", current, res);

    for (std::size_t it = 0; it < opts.max_iterations && res >= opts.tol; ++it) {
        const Eigen::MatrixXd jac = kernels::jacobian(g, current.theta());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
        if (eig.info() != Eigen::Success) throw RefinementError("refine_equilibrium: eigensolver failed", current, res);

        const auto& lambda = eig.eigenvalues();
        const auto& v = eig.eigenvectors();
        const double cutoff = 1e-9 * std::max(1.0, lambda.cwiseAbs().maxCoeff());
        const Eigen::Map<const Eigen::VectorXd> fv(f.data(), ni);
        const Eigen::VectorXd proj = v.transpose() * fv;
        Eigen::VectorXd coeff = Eigen::VectorXd::Zero(ni);
        for (Eigen::Index i = 0; i < ni; ++i)
            if (std::abs(lambda(i)) > cutoff) coeff(i) = -proj(i) / lambda(i);
        Eigen::VectorXd step = v * coeff;
        step.array() -= step.mean(); // rotation mode, exactly

        // backtracking on the residual
        double alpha = 1.0;
        bool improved = false;
        for (int tries = 0; tries < 40; ++tries, alpha *= 0.5) {
            std::vector<double> trial(n);
            for (std::size_t j = 0; j < n; ++j) trial[j] = current[j] + alpha * step(static_cast<Eigen::Index>(j));
            PhaseState candidate(std::move(trial));
            auto fc = rhs(g, candidate);
            const double rc = inf_norm(fc);
            if (rc < res) {
                current = std::move(candidate);
                f = std::move(fc);
                res = rc;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    if (!(res < opts.tol))
        throw RefinementError("refine_equilibrium: residual " + std::to_string(res) + " above tolerance", current, res);
    return current;
}

NormalizedState normalize_phase(const PhaseState& s)
{
    if (s.size() == 0) return {s, false, 0.0};
    const auto rho1 = moment(s, 1);
    if (std::abs(rho1) < 1e-14) {
        const double shift = s[0];
        return {s.shifted(-shift), false, shift};
    }
    const double psi = std::arg(rho1);
    if (psi == 0.0) return {s, true, 0.0};
    return {s.shifted(-psi), true, psi};
}

} // namespace kuramoto
