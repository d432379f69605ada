#include "fwmcomb/steady_state.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <numbers>
#include <algorithm>

namespace fwm {

namespace {

constexpr int kN = 15;
using Vec = Eigen::Matrix<double, kN, 1>;
using Jac = Eigen::Matrix<double, kN, kN>;
constexpr cplx I{0.0, 1.0};
constexpr double kDivergence = 1e100;
constexpr double kUnderflowFloor = 1e-280;

Vec pack(const SteadyState& s)
{
    Vec x;
    const std::array<cplx, 7> z{s.alpha_c[0], s.alpha_c[1], s.alpha_c[2],
                                s.alpha_a[0], s.alpha_a[1], s.alpha_a[2], s.rho_ge};
    for (int k = 0; k < 7; ++k) {
        x[k] = z[k].real();
        x[7 + k] = z[k].imag();
    }
    x[14] = s.rho_ee;
    return x;
}

SteadyState unpack(const Vec& x)
{
    SteadyState s;
    for (int k = 0; k < 3; ++k) {
        s.alpha_c[k] = {x[k], x[7 + k]};
        s.alpha_a[k] = {x[3 + k], x[10 + k]};
    }
    s.rho_ge = {x[6], x[13]};
    s.rho_ee = x[14];
    return s;
}

double max_norm(const Residual& r) { return r.cwiseAbs().maxCoeff(); }

Vec real_residual(const Residual& r)
{
    Vec f;
    for (int k = 0; k < 7; ++k) {
        f[k] = r[k].real();
        f[7 + k] = r[k].imag();
    }
    f[14] = r[7].real();
    return f;
}

// Wirtinger derivatives m = dr/dz, n = dr/dz* mapped to the real 15x15 Jacobian.
Jac jacobian(const SteadyState& s, const SystemParams& p)
{
    const Detunings d = detunings(p);
    const auto& a = s.alpha_a;
    const double chi = p.chi_fwm;
    const double f = p.f;

    Eigen::Matrix<cplx, 8, 7> m = Eigen::Matrix<cplx, 8, 7>::Zero();
    Eigen::Matrix<cplx, 8, 7> n = Eigen::Matrix<cplx, 8, 7>::Zero();
    Eigen::Matrix<cplx, 8, 1> c = Eigen::Matrix<cplx, 8, 1>::Zero();

    for (int i = 0; i < 3; ++i) {
        m(i, i) = -(p.kappa[i] + I * d.c[i]);
        m(i, 3 + i) = -I * std::conj(p.g[i]);
        m(3 + i, 3 + i) = -(p.gamma[i] + I * d.a[i]);
        m(3 + i, i) = -I * p.g[i];
    }
    n(3, 3) = -2.0 * I * chi * a[1] * a[2];
    m(3, 4) = -2.0 * I * chi * std::conj(a[0]) * a[2];
    m(3, 5) = -2.0 * I * chi * std::conj(a[0]) * a[1];
    m(4, 3) = -2.0 * I * chi * std::conj(a[2]) * a[0];
    n(4, 5) = -I * chi * a[0] * a[0];
    m(5, 3) = -2.0 * I * chi * std::conj(a[1]) * a[0];
    n(5, 4) = -I * chi * a[0] * a[0];
    m(5, 6) = -I * f;

    m(6, 6) = -(p.gamma_eg + I * d.qe);
    m(6, 5) = I * f * s.y();
    c(6) = 2.0 * I * f * a[2];

    m(7, 6) = I * f * std::conj(a[2]);
    n(7, 6) = -I * f * a[2];
    m(7, 5) = -I * f * std::conj(s.rho_ge);
    n(7, 5) = I * f * s.rho_ge;
    c(7) = -p.gamma_ee;

    Jac J = Jac::Zero();
    for (int k = 0; k < 8; ++k) {
        const int re = k < 7 ? k : 14;
        for (int j = 0; j < 7; ++j) {
            J(re, j) = (m(k, j) + n(k, j)).real();
            J(re, 7 + j) = -m(k, j).imag() + n(k, j).imag();
            if (k < 7) {
                J(7 + k, j) = (m(k, j) + n(k, j)).imag();
                J(7 + k, 7 + j) = (m(k, j) - n(k, j)).real();
            }
        }
        J(re, 14) = c(k).real();
        if (k < 7) J(7 + k, 14) = c(k).imag();
    }
    return J;
}

bool diverged(const Vec& x)
{
    for (int i = 0; i < kN; ++i)
        if (!std::isfinite(x[i]) || std::abs(x[i]) > kDivergence) return true;
    return false;
}

struct NewtonResult {
    SteadyState state;
    bool converged = false;
    bool diverged = false;
};

NewtonResult newton(const SystemParams& p, const SteadyState& start, const SolveOptions& opts)
{
    Vec x = pack(start);
    NewtonResult out;
    Residual r = residual(unpack(x), p);
    double phi = 0.5 * real_residual(r).squaredNorm();

    for (int it = 0; it <= opts.max_iterations; ++it) {
        if (max_norm(r) <= opts.tolerance) {
            // Polish while the residual keeps dropping.
            for (int extra = 0; extra < 4; ++extra) {
                Eigen::FullPivLU<Jac> lu(jacobian(unpack(x), p));
                if (!lu.isInvertible()) break;
                const Vec xt = x + lu.solve(-real_residual(r));
                if (diverged(xt)) break;
                const Residual rt = residual(unpack(xt), p);
                const double phit = 0.5 * real_residual(rt).squaredNorm();
                if (!(phit < 0.25 * phi)) break;
                x = xt;
                r = rt;
                phi = phit;
            }
            out.state = unpack(x);
            out.state.residual_norm = max_norm(r);
            out.state.iterations = it;
            out.converged = true;
            return out;
        }
        if (it == opts.max_iterations) break;

        Eigen::FullPivLU<Jac> lu(jacobian(unpack(x), p));
        if (!lu.isInvertible()) break;
        const Vec dx = lu.solve(-real_residual(r));

        double lambda = 1.0;
        bool accepted = false;
        while (lambda >= 1e-8) {
            const Vec xt = x + lambda * dx;
            if (diverged(xt)) {
                lambda *= 0.5;
                continue;
            }
            const Residual rt = residual(unpack(xt), p);
            const double phit = 0.5 * real_residual(rt).squaredNorm();
            if (phit <= (1.0 - 1e-4 * lambda) * phi || max_norm(rt) <= opts.tolerance) {
                x = xt;
                r = rt;
                phi = phit;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            // Line search exhausted: take the full step.
            const Vec xt = x + dx;
            if (diverged(xt)) {
                out.diverged = true;
                break;
            }
            x = xt;
            r = residual(unpack(x), p);
            phi = 0.5 * real_residual(r).squaredNorm();
        }
    }
    out.state = unpack(x);
    out.state.residual_norm = max_norm(r);
    out.state.iterations = opts.max_iterations;
    return out;
}

// Tracks the branch connected to the linear solution: chi from 0, then f from 0.
std::optional<SteadyState> continuation(const SystemParams& p, const SolveOptions& opts, bool& diverged_flag)
{
    SteadyState s = linear_solution(p);
    for (int stage = 0; stage < 2; ++stage) {
        double lam = 0.0;
        double step = 0.1;
        while (lam < 1.0) {
            const double next = std::min(1.0, lam + step);
            SystemParams q = p;
            if (stage == 0) {
                q.chi_fwm = next * p.chi_fwm;
                q.f = 0.0;
            } else {
                q.f = next * p.f;
            }
            NewtonResult nr = newton(q, s, opts);
            diverged_flag = diverged_flag || nr.diverged;
            if (nr.converged) {
                s = nr.state;
                lam = next;
                step = std::min(2.0 * step, 0.25);
            } else {
                step *= 0.5;
                if (step < 1e-5) return std::nullopt;
            }
        }
    }
    return s;
}

bool same_state(const SteadyState& a, const SteadyState& b)
{
    auto close = [](cplx u, cplx v) {
        return std::abs(u - v) <= 1e-6 * std::max(std::abs(u), std::abs(v)) + 1e-14;
    };
    for (int k = 0; k < 3; ++k)
        if (!close(a.alpha_c[k], b.alpha_c[k]) || !close(a.alpha_a[k], b.alpha_a[k])) return false;
    return close(a.rho_ge, b.rho_ge) && close(a.rho_ee, b.rho_ee);
}

}  // namespace

Residual residual(const SteadyState& s, const SystemParams& p)
{
    const Detunings d = detunings(p);
    const auto& c = s.alpha_c;
    const auto& a = s.alpha_a;
    const double chi = p.chi_fwm;
    const double f = p.f;
    const double y = s.y();

    Residual r;
    r[0] = -(p.kappa[0] + I * d.c[0]) * c[0] - I * std::conj(p.g[0]) * a[0] + p.eps_l1;
    r[1] = -(p.kappa[1] + I * d.c[1]) * c[1] - I * std::conj(p.g[1]) * a[1] + p.eps_l2;
    r[2] = -(p.kappa[2] + I * d.c[2]) * c[2] - I * std::conj(p.g[2]) * a[2];
    r[3] = -(p.gamma[0] + I * d.a[0]) * a[0] - I * p.g[0] * c[0]
           - 2.0 * I * chi * std::conj(a[0]) * a[1] * a[2];
    r[4] = -(p.gamma[1] + I * d.a[1]) * a[1] - I * p.g[1] * c[1]
           - I * chi * std::conj(a[2]) * a[0] * a[0];
    r[5] = -(p.gamma[2] + I * d.a[2]) * a[2] - I * p.g[2] * c[2] - I * f * s.rho_ge
           - I * chi * std::conj(a[1]) * a[0] * a[0];
    r[6] = -(p.gamma_eg + I * d.qe) * s.rho_ge + I * f * a[2] * y;
    r[7] = -p.gamma_ee * s.rho_ee + I * f * (std::conj(a[2]) * s.rho_ge - a[2] * std::conj(s.rho_ge));
    return r;
}

SteadyState linear_solution(const SystemParams& p)
{
    const Detunings d = detunings(p);
    SteadyState s;
    const std::array<double, 2> eps{p.eps_l1, p.eps_l2};
    for (int i = 0; i < 2; ++i) {
        Eigen::Matrix2cd M;
        M << -(p.kappa[i] + I * d.c[i]), -I * std::conj(p.g[i]),
             -I * p.g[i], -(p.gamma[i] + I * d.a[i]);
        const Eigen::Vector2cd rhs(-eps[i], 0.0);
        const Eigen::Vector2cd sol = M.partialPivLu().solve(rhs);
        s.alpha_c[i] = sol[0];
        s.alpha_a[i] = sol[1];
    }
    s.residual_norm = max_norm(residual(s, p));
    return s;
}

SteadyState solve_steady_state(const SystemParams& p, const std::optional<SteadyState>& guess,
                               const SolveOptions& opts)
{
    const SteadyState start = guess ? *guess : linear_solution(p);
    NewtonResult nr = newton(p, start, opts);
    bool diverged_flag = nr.diverged;
    SteadyState s;
    if (nr.converged) {
        s = nr.state;
    } else {
        auto cs = continuation(p, opts, diverged_flag);
        if (!cs) {
            if (diverged_flag)
                throw SolverError(SolverError::Kind::divergence,
                                  "steady state diverged: amplitudes overflow (unstable parameters)");
            throw SolverError(SolverError::Kind::nonconvergence,
                              "steady state did not converge within " + std::to_string(opts.max_iterations) +
                                  " Newton iterations");
        }
        s = *cs;
    }

    if (opts.check_multistability) {
        constexpr cplx kick{1.0 + 0.3 / std::numbers::sqrt2, 0.3 / std::numbers::sqrt2};
        SteadyState alt = s;
        for (auto& z : alt.alpha_c) z *= kick;
        for (auto& z : alt.alpha_a) z *= kick;
        alt.rho_ge *= kick;
        alt.rho_ee = std::min(0.5, s.rho_ee + 0.1);
        SolveOptions o = opts;
        o.check_multistability = false;
        NewtonResult other = newton(p, alt, o);
        s.multistable = other.converged && !same_state(other.state, s);
    }
    return s;
}

cplx analytic_alpha_a3(const SystemParams& p, cplx alpha_a1, cplx alpha_a2, double y)
{
    const Detunings d = detunings(p);
    const cplx den = p.f * p.f * y / (I * d.qe + p.gamma_eg) - (I * d.a[2] + p.gamma[2]);
    if (!(std::abs(den) > 0.0) || !std::isfinite(std::abs(den)))
        throw SolverError(SolverError::Kind::singular, "analytic FWM amplitude: vanishing denominator");
    return I * p.chi_fwm * std::conj(alpha_a2) * alpha_a1 * alpha_a1 / den;
}

double reference_intensity(const SystemParams& p, const SolveOptions& opts)
{
    SystemParams q = p;
    q.f = 0.0;
    SolveOptions o = opts;
    o.check_multistability = false;
    return std::norm(solve_steady_state(q, std::nullopt, o).alpha_a[2]);
}

double enhancement_factor(const SteadyState& s, double reference)
{
    if (!(reference > kUnderflowFloor))
        throw SolverError(SolverError::Kind::underflow,
                          "enhancement factor: f = 0 FWM intensity below underflow floor");
    return std::norm(s.alpha_a[2]) / reference;
}

double enhancement_factor(const SystemParams& p, const SolveOptions& opts)
{
    return enhancement_factor(solve_steady_state(p, std::nullopt, opts), reference_intensity(p, opts));
}

}  // namespace fwm
