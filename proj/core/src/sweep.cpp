#include "fwmcomb/sweep.hpp"

#include "fwmcomb/measures.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

namespace fwm {

namespace {

bool axis_changes_reference(const std::string& name)
{
    return name == "chi_fwm" || name == "eps_l1" || name == "eps_l2";
}

}  // namespace

bool is_sweep_axis(const std::string& name)
{
    static const std::set<std::string> axes = {"omega_qe", "volts", "f", "chi_fwm", "eps_l1", "eps_l2"};
    return axes.count(name) > 0;
}

std::vector<double> axis_grid(const SweepAxis& axis)
{
    if (axis.steps < 2) throw SweepError("sweep needs at least 2 steps");
    std::vector<double> v(axis.steps);
    const double span = axis.to - axis.from;
    for (int k = 0; k < axis.steps; ++k) v[k] = axis.from + span * k / (axis.steps - 1);
    v.front() = axis.from;
    v.back() = axis.to;
    return v;
}

SystemParams apply_axis(const SystemParams& p, const std::string& name, double value)
{
    SystemParams q = p;
    if (name == "omega_qe")
        q.omega_qe = value;
    else if (name == "volts")
        q.omega_qe = volt_to_omega(value, p.volt_anchor, p.volt_slope);
    else if (name == "f")
        q.f = value;
    else if (name == "chi_fwm")
        q.chi_fwm = value;
    else if (name == "eps_l1")
        q.eps_l1 = value;
    else if (name == "eps_l2")
        q.eps_l2 = value;
    else
        throw SweepError("axis not sweepable: " + name);
    validate(q);
    return q;
}

PointResult evaluate_point(const SystemParams& p, const std::optional<SteadyState>& guess, double reference,
                           const SolveOptions& opts)
{
    PointResult pr;
    pr.record.omega_qe = p.omega_qe;
    try {
        pr.state = solve_steady_state(p, guess, opts);
        pr.record.residual_norm = pr.state->residual_norm;
        pr.record.ef = enhancement_factor(*pr.state, reference);
    } catch (const SolverError& e) {
        pr.error = e.what();
        pr.record.residual_norm.reset();
        return pr;
    }

    const Mat12 A = build_drift(p, *pr.state);
    const Mat12 D = build_diffusion(p);
    pr.drift = A;
    const StabilityReport st = stability(A);
    if (!st.hurwitz) {
        pr.error = "drift matrix not Hurwitz (max real part " + std::to_string(st.max_real) + ")";
        return pr;
    }
    try {
        pr.intracavity = solve_lyapunov(A, D);
        pr.lyapunov_residual = lyapunov_residual(A, pr.intracavity->V, D);
        pr.uncertainty_margin = uncertainty_margin(pr.intracavity->V);
        pr.output = output_covariance(A, D, p);
        const auto& Vo = pr.output->V;
        const auto base = p.log_base;
        SweepRecord& r = pr.record;
        r.en_12 = logneg(Vo, 0, 1, base);
        r.en_13 = logneg(Vo, 0, 2, base);
        r.en_23 = logneg(Vo, 1, 2, base);
        r.ep_1 = entanglement_potential(Vo.block<2, 2>(0, 0), base);
        r.ep_2 = entanglement_potential(Vo.block<2, 2>(2, 2), base);
        r.ep_3 = entanglement_potential(Vo.block<2, 2>(4, 4), base);
        const auto& Vi = pr.intracavity->V;
        pr.intracavity_en = {logneg(Vi, 0, 1, base), logneg(Vi, 0, 2, base), logneg(Vi, 1, 2, base)};
        r.stable = true;
    } catch (const std::runtime_error& e) {
        pr.error = e.what();
        SweepRecord& r = pr.record;
        r.en_12.reset();
        r.en_13.reset();
        r.en_23.reset();
        r.ep_1.reset();
        r.ep_2.reset();
        r.ep_3.reset();
        r.stable = false;
    }
    return pr;
}

std::vector<SweepRecord> SweepResult::records() const
{
    std::vector<SweepRecord> out;
    out.reserve(points.size());
    for (const auto& pt : points) out.push_back(pt.record);
    return out;
}

SweepResult run_sweep(const SystemParams& p, const SweepAxis& axis, const SweepOptions& opts)
{
    return run_sweep_values(p, axis.name, axis_grid(axis), opts);
}

SweepResult run_sweep_values(const SystemParams& p, const std::string& axis, const std::vector<double>& values,
                             const SweepOptions& opts)
{
    if (!is_sweep_axis(axis)) throw SweepError("axis not sweepable: " + axis);
    if (values.empty()) throw SweepError("empty sweep");

    SweepResult res;
    res.axis = axis;
    res.values = values;
    res.points.resize(values.size());

    const bool per_point_ref = axis_changes_reference(axis);
    double shared_ref = 0.0;
    if (!per_point_ref) {
        try {
            shared_ref = reference_intensity(p, opts.solve);
        } catch (const SolverError& e) {
            throw SweepError(std::string("reference (f = 0) solve failed: ") + e.what());
        }
    }

    auto eval = [&](std::size_t k, const std::optional<SteadyState>& guess) {
        PointResult pr;
        try {
            const SystemParams q = apply_axis(p, axis, values[k]);
            double ref = shared_ref;
            if (per_point_ref) ref = reference_intensity(q, opts.solve);
            pr = evaluate_point(q, guess, ref, opts.solve);
        } catch (const std::exception& e) {
            pr = PointResult{};
            pr.record.omega_qe = axis == "omega_qe" ? values[k] : p.omega_qe;
            if (axis == "volts") pr.record.omega_qe = volt_to_omega(values[k], p.volt_anchor, p.volt_slope);
            pr.error = e.what();
        }
        if (axis == "volts") pr.record.volts = values[k];
        return pr;
    };

    const std::size_t n = values.size();
    const int threads = std::clamp(opts.threads, 1, static_cast<int>(n));
    if (threads == 1) {
        std::optional<SteadyState> guess;
        for (std::size_t k = 0; k < n; ++k) {
            res.points[k] = eval(k, guess);
            if (res.points[k].state) guess = res.points[k].state;
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < n; k = next++) res.points[k] = eval(k, std::nullopt);
            });
        }
        for (auto& th : pool) th.join();
    }

    for (const auto& pt : res.points)
        if (!pt.record.ef) ++res.failures;
    if (2 * static_cast<std::size_t>(res.failures) > n)
        throw SweepError("sweep failed at " + std::to_string(res.failures) + " of " + std::to_string(n) +
                         " points");
    return res;
}

}  // namespace fwm
