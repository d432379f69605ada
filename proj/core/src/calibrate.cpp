#include "fwmcomb/config_io.hpp"
#include "fwmcomb/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fwm {

namespace {

struct Candidate {
    SystemParams params;
    double factor = 1.0;
    bool complete = false;
    double dip = 0.0;
    double peak = 0.0;
    int argmin = -1;
    int argmax = -1;
    bool shape_ok = false;
    bool met = false;
    double violation = std::numeric_limits<double>::infinity();
};

struct Window {
    std::vector<double> grid;
    int lo = 0;
    int hi = 0;
};

Candidate evaluate(const SystemParams& p, double factor, const Window& w, double reference,
                   const CalibrationTargets& t)
{
    SolveOptions so;
    so.check_multistability = false;
    Candidate c;
    c.params = p;
    c.factor = factor;
    const EfCurve curve = ef_curve(p, w.grid, reference, so);
    c.complete = std::all_of(curve.ef.begin(), curve.ef.end(), [](const auto& v) { return v.has_value(); });
    if (!c.complete) return c;
    const int n = static_cast<int>(curve.ef.size());
    c.argmin = c.argmax = 0;
    for (int k = 1; k < n; ++k) {
        if (*curve.ef[k] < *curve.ef[c.argmin]) c.argmin = k;
        if (*curve.ef[k] > *curve.ef[c.argmax]) c.argmax = k;
    }
    c.dip = *curve.ef[0];
    c.peak = *curve.ef[c.argmax];
    c.shape_ok = c.argmin == 0 && c.argmax >= w.lo && c.argmax <= w.hi;
    c.met = c.shape_ok && c.dip <= t.ef_dip_max && c.peak >= t.ef_peak_min;
    const double dip_gap = t.ef_dip_max > 0.0 ? std::max(0.0, std::log10(c.dip / t.ef_dip_max))
                                              : std::numeric_limits<double>::infinity();
    c.violation = dip_gap + std::max(0.0, std::log10(t.ef_peak_min / c.peak));
    return c;
}

bool better(const Candidate& a, const Candidate& b)
{
    if (a.complete != b.complete) return a.complete;
    if (a.shape_ok != b.shape_ok) return a.shape_ok;
    return a.violation < b.violation;
}

}  // namespace

EfCurve ef_curve(const SystemParams& p, const std::vector<double>& omega_qe, double reference,
                 const SolveOptions& opts)
{
    EfCurve c;
    c.omega_qe = omega_qe;
    c.ef.resize(omega_qe.size());
    std::optional<SteadyState> guess;
    for (std::size_t k = 0; k < omega_qe.size(); ++k) {
        SystemParams q = p;
        q.omega_qe = omega_qe[k];
        try {
            const SteadyState s = solve_steady_state(q, guess, opts);
            guess = s;
            c.ef[k] = enhancement_factor(s, reference);
        } catch (const SolverError&) {
            c.ef[k].reset();
        }
    }
    return c;
}

CalibrationResult calibrate_defaults(const SystemParams& base, const CalibrationTargets& targets,
                                     const CalibrationOptions& opts)
{
    if (opts.steps < 3 || opts.f_points < 2 || !(opts.f_min > 0.0) || !(opts.f_max > opts.f_min))
        throw SweepError("calibration: invalid search options");

    Window w;
    w.grid = axis_grid({"omega_qe", base.omega3 + opts.window_from, base.omega3 + opts.window_to, opts.steps});
    const double margin = 0.5 * (1.0 - opts.central_fraction) * (opts.steps - 1);
    w.lo = static_cast<int>(std::ceil(margin));
    w.hi = static_cast<int>(std::floor(opts.steps - 1 - margin));

    Candidate best;
    bool have_best = false;
    auto consider = [&](const Candidate& c) {
        if (!have_best || better(c, best)) {
            best = c;
            have_best = true;
        }
    };

    for (double factor : opts.drive_factors) {
        SystemParams p = base;
        p.eps_l1 *= std::sqrt(factor);
        p.eps_l2 *= std::sqrt(factor);
        double reference = 0.0;
        try {
            reference = reference_intensity(p);
        } catch (const SolverError&) {
            continue;
        }
        if (!(reference > 0.0)) continue;

        std::vector<Candidate> scan;
        for (int i = 0; i < opts.f_points; ++i) {
            const double t = static_cast<double>(i) / (opts.f_points - 1);
            p.f = opts.f_min * std::pow(opts.f_max / opts.f_min, t);
            scan.push_back(evaluate(p, factor, w, reference, targets));
            consider(scan.back());
        }

        // Largest f whose EF peak still sits inside the central window.
        std::optional<Candidate> chosen;
        for (int i = static_cast<int>(scan.size()) - 2; i >= 0 && !chosen; --i) {
            if (!scan[i].shape_ok) continue;
            const bool right_moved = !scan[i + 1].complete || scan[i + 1].argmax > w.hi ||
                                     scan[i + 1].argmin != 0;
            if (!right_moved) {
                chosen = scan[i + 1].shape_ok ? scan[i + 1] : scan[i];
                continue;
            }
            Candidate lo = scan[i];
            double f_lo = lo.params.f;
            double f_hi = scan[i + 1].params.f;
            for (int it = 0; it < opts.bisection_iterations; ++it) {
                SystemParams q = p;
                q.f = std::sqrt(f_lo * f_hi);
                Candidate c = evaluate(q, factor, w, reference, targets);
                if (c.shape_ok) {
                    lo = c;
                    f_lo = q.f;
                } else {
                    f_hi = q.f;
                }
                if (f_hi / f_lo - 1.0 < 1e-10) break;
            }
            chosen = lo;
        }
        if (chosen) {
            consider(*chosen);
            if (chosen->met) {
                best = *chosen;
                break;
            }
        }
    }

    CalibrationResult r;
    if (!have_best) throw SweepError("calibration: no candidate could be evaluated");
    r.params = best.params;
    r.achieved = best.met;
    r.ef_dip = best.dip;
    r.ef_peak = best.peak;
    r.argmin = best.argmin;
    r.argmax = best.argmax;
    r.peak_omega_qe = best.argmax >= 0 ? w.grid[best.argmax] : base.omega_qe;
    r.drive_factor = best.factor;
    r.report = std::string(r.achieved ? "targets met" : "targets not met, nearest achieved") +
               ": ef_dip_max=" + format_double(targets.ef_dip_max) +
               " ef_peak_min=" + format_double(targets.ef_peak_min) +
               "; EF(window start)=" + format_double(r.ef_dip) + " max EF=" + format_double(r.ef_peak) +
               " at omega_qe=" + format_double(r.peak_omega_qe) + "; f=" + format_double(r.params.f) +
               " drive factor=" + format_double(r.drive_factor);
    r.params.provenance = "fwmcomb calibrate, " + r.report;
    return r;
}

}  // namespace fwm
