// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if all pass.

#include "fwmcomb/fluctuations.hpp"
#include "fwmcomb/measures.hpp"
#include "fwmcomb/steady_state.hpp"
#include "fwmcomb/sweep.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <string>

using namespace fwm;

namespace {

// Pinned tolerances and budgets.
constexpr double kResidualTol = 1e-12;
constexpr int kMaxIterations = 100;
constexpr double kSolveBudgetMs = 50.0;
constexpr double kLinearTol = 1e-9;
constexpr double kDipMax = 1e-3;
constexpr double kPeakMin = 10.0;
constexpr double kSweepBudgetS = 10.0;
constexpr double kWeakG3 = 1e-8;
constexpr double kAnalyticTol = 1e-3;
constexpr double kJacobianTol = 1e-6;
constexpr int kJacobianDraws = 50;
constexpr double kLyapunovTol = 1e-10;
constexpr double kUncertaintyTol = 1e-10;
constexpr double kMeasureTol = 1e-9;
constexpr int kInvarianceCases = 100;
constexpr double kJumpRatio = 10.0;
constexpr double kOdeTol = 1e-6;
constexpr double kOdeTime = 4000.0;
constexpr double kOdeStep = 0.5;

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool ok, const std::string& detail)
{
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    if (!ok) ++failures;
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

SweepAxis default_axis(const SystemParams& p) { return {"omega_qe", p.omega3, p.omega3 + 0.0005, 101}; }

void criterion1()
{
    const SystemParams p = default_params();
    const auto t0 = Clock::now();
    const SteadyState s = solve_steady_state(p);
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    const double res = residual(s, p).cwiseAbs().maxCoeff();
    report(1, res <= kResidualTol && s.iterations <= kMaxIterations && ms < kSolveBudgetMs,
           "residual " + num(res) + ", " + std::to_string(s.iterations) + " iterations, " + num(ms) + " ms");
}

void criterion2()
{
    SystemParams p = default_params();
    p.chi_fwm = 0.0;
    p.f = 0.0;
    const SteadyState s = solve_steady_state(p);
    const cplx I(0, 1);
    const double w[2] = {p.omega1, p.omega2};
    const double eps[2] = {p.eps_l1, p.eps_l2};
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        const cplx kc = p.kappa[i] + I * (p.omega_c[i] - w[i]);
        const cplx ka = p.gamma[i] + I * (p.omega_a[i] - w[i]);
        const cplx a = -I * p.g[i] * eps[i] / (kc * ka + std::norm(p.g[i]));
        const cplx c = (eps[i] - I * std::conj(p.g[i]) * a) / kc;
        worst = std::max({worst, rel(s.alpha_c[i], c), rel(s.alpha_a[i], a)});
    }
    const bool third_dark = s.alpha_a[2] == cplx(0.0) && s.alpha_c[2] == cplx(0.0);
    report(2, worst <= kLinearTol && third_dark, "max relative deviation " + num(worst));
}

void criterion3(const SweepResult& r, double seconds)
{
    const auto recs = r.records();
    bool complete = r.failures == 0;
    int imin = 0, imax = 0;
    for (int k = 0; complete && k < static_cast<int>(recs.size()); ++k) {
        if (*recs[k].ef < *recs[imin].ef) imin = k;
        if (*recs[k].ef > *recs[imax].ef) imax = k;
    }
    if (!complete) {
        report(3, false, std::to_string(r.failures) + " failed sweep points");
        return;
    }
    const double dip = *recs[0].ef, peak = *recs[imax].ef;
    const int last = static_cast<int>(recs.size()) - 1;
    const bool ok = dip <= kDipMax && peak >= kPeakMin && imin == 0 && imax > 0 && imax < last &&
                    seconds < kSweepBudgetS;
    report(3, ok,
           "EF(omega3) " + num(dip) + ", max EF " + num(peak) + " at index " + std::to_string(imax) +
               ", argmin index " + std::to_string(imin) + ", sweep " + num(seconds) + " s");
}

void criterion4()
{
    SystemParams p = default_params();
    p.g[2] = kWeakG3;
    std::optional<SteadyState> guess;
    double worst = 0.0;
    bool ok = std::abs(p.g[2]) <= 1e-6 * p.gamma[2];
    for (double w : axis_grid(default_axis(p))) {
        p.omega_qe = w;
        const SteadyState s = solve_steady_state(p, guess);
        guess = s;
        const cplx a = analytic_alpha_a3(p, s.alpha_a[0], s.alpha_a[1], s.y());
        worst = std::max(worst, std::abs(std::abs(a) - std::abs(s.alpha_a[2])) / std::abs(s.alpha_a[2]));
    }
    ok = ok && worst <= kAnalyticTol;
    report(4, ok, "g3 = " + num(kWeakG3) + ", max relative |alpha_a3| deviation " + num(worst));
}

void criterion5()
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < kJacobianDraws; ++t) {
        SystemParams p = oracle::destiffened(default_params());
        for (int k = 0; k < 3; ++k) {
            p.gamma_noise[k] = 0.01 + 0.1 * u(rng);
            p.g[k] = {0.06 * (u(rng) - 0.5), 0.06 * (u(rng) - 0.5)};
        }
        p.chi_fwm = u(rng);
        p.f = 0.1 * u(rng);
        p.eps_l1 = 0.05 * u(rng);
        p.eps_l2 = 0.05 * u(rng);
        p.omega_qe = p.omega3 + 0.02 * (u(rng) - 0.5);
        const SteadyState s = solve_steady_state(p);
        const Mat12 A = build_drift(p, s);
        const auto J = oracle::fd_drift(p, s);
        worst = std::max(worst, (A - J).cwiseAbs().maxCoeff() / J.cwiseAbs().maxCoeff());
    }
    report(5, worst <= kJacobianTol,
           std::to_string(kJacobianDraws) + " draws, max relative deviation " + num(worst));
}

void criterion6(const SweepResult& r)
{
    double res = 0.0, margin = 1.0, rel_res = 0.0;
    int accepted = 0;
    for (const auto& pt : r.points) {
        if (!pt.record.stable) continue;
        ++accepted;
        res = std::max(res, pt.lyapunov_residual);
        rel_res = std::max(rel_res, pt.lyapunov_residual / pt.intracavity->V.cwiseAbs().maxCoeff());
        margin = std::min(margin, pt.uncertainty_margin);
    }
    report(6, accepted > 0 && res <= kLyapunovTol && margin >= -kUncertaintyTol,
           std::to_string(accepted) + " points, max residual " + num(res) + " (relative " + num(rel_res) +
               "), min uncertainty margin " + num(margin));
}

void criterion7()
{
    double tmsv_err = 0.0;
    for (double r : {0.1, 0.5, 1.0}) tmsv_err = std::max(tmsv_err, std::abs(logneg(oracle::tmsv(r), 0, 1) - 2.0 * r));

    const double vac = logneg(0.5 * Eigen::Matrix4d::Identity(), 0, 1);
    const double prod = logneg(Eigen::Matrix4d::Identity(), 0, 1);

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.05, 1.2);
    double drift = 0.0;
    for (int t = 0; t < kInvarianceCases; ++t) {
        const Eigen::Matrix4d V = oracle::tmsv(u(rng));
        Eigen::Matrix4d L = Eigen::Matrix4d::Zero();
        L.topLeftCorner<2, 2>() = oracle::random_symplectic(1, rng);
        L.bottomRightCorner<2, 2>() = oracle::random_symplectic(1, rng);
        drift = std::max(drift, std::abs(logneg(L * V * L.transpose(), 0, 1) - logneg(V, 0, 1)));
    }
    report(7, tmsv_err <= kMeasureTol && vac == 0.0 && prod == 0.0 && drift <= kMeasureTol,
           "TMSV error " + num(tmsv_err) + ", vacuum " + num(vac) + ", product " + num(prod) +
               ", invariance drift " + num(drift));
}

void criterion8(const SweepResult& r)
{
    const auto recs = r.records();
    bool ok = r.failures == 0;
    std::string detail;
    int imax = 0;
    for (int k = 0; ok && k < static_cast<int>(recs.size()); ++k)
        if (*recs[k].ef > *recs[imax].ef) imax = k;
    const char* names[3] = {"12", "13", "23"};
    for (int pair = 0; ok && pair < 3; ++pair) {
        std::vector<double> en;
        for (const auto& rec : recs) {
            const auto& v = pair == 0 ? rec.en_12 : pair == 1 ? rec.en_13 : rec.en_23;
            if (!v || !std::isfinite(*v) || *v < 0.0) {
                ok = false;
                break;
            }
            en.push_back(*v);
        }
        if (!ok) {
            detail += std::string("pair ") + names[pair] + " missing, negative or non-finite; ";
            break;
        }
        std::vector<double> steps;
        for (std::size_t k = 1; k < en.size(); ++k) steps.push_back(std::abs(en[k] - en[k - 1]));
        std::vector<double> sorted = steps;
        std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
        const double median = sorted[sorted.size() / 2];
        const double ratio = *std::max_element(steps.begin(), steps.end()) / median;
        const bool cont = median > 0.0 && ratio <= kJumpRatio;
        const bool order = en[0] < en[imax];
        ok = ok && cont && order;
        detail += std::string("E_N(") + names[pair] + ") dip " + num(en[0]) + " peak " + num(en[imax]) +
                  " jump ratio " + num(ratio) + "; ";
    }
    report(8, ok, detail);
}

void criterion9()
{
    double worst = 0.0;
    for (const SystemParams& p :
         {oracle::destiffened(default_params()), oracle::destiffened_rates_only(default_params())}) {
        const auto xa = oracle::pack15(solve_steady_state(p));
        const auto xo = oracle::pack15(oracle::integrate_to_steady(p, kOdeTime, kOdeStep));
        worst = std::max(worst, (xa - xo).cwiseAbs().maxCoeff() / xa.cwiseAbs().maxCoeff());
    }
    report(9, worst <= kOdeTol, "max relative deviation " + num(worst) + " on two de-stiffened rate sets");
}

void criterion10(const SweepResult& first)
{
    const SystemParams p = default_params();
    const std::string a = to_csv(first.records());
    const std::string b = to_csv(run_sweep(p, default_axis(p)).records());
    report(10, a == b, a == b ? "identical " + std::to_string(a.size()) + "-byte CSV" : "CSV output differs");
}

template <class F>
void guarded(int id, F&& f)
{
    try {
        f();
    } catch (const std::exception& e) {
        report(id, false, std::string("exception: ") + e.what());
    }
}

}  // namespace

int main()
{
    guarded(1, criterion1);
    guarded(2, criterion2);

    std::optional<SweepResult> sweep;
    double seconds = 0.0;
    try {
        const SystemParams p = default_params();
        const auto t0 = Clock::now();
        sweep = run_sweep(p, default_axis(p));
        seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    } catch (const std::exception& e) {
        std::printf("default sweep failed: %s\n", e.what());
    }

    auto with_sweep = [&](int id, auto&& f) {
        if (sweep)
            guarded(id, [&] { f(*sweep); });
        else
            report(id, false, "default sweep unavailable");
    };

    with_sweep(3, [&](const SweepResult& r) { criterion3(r, seconds); });
    guarded(4, criterion4);
    guarded(5, criterion5);
    with_sweep(6, criterion6);
    guarded(7, criterion7);
    with_sweep(8, criterion8);
    guarded(9, criterion9);
    with_sweep(10, criterion10);

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
