#pragma once

#include "fwmcomb/fluctuations.hpp"
#include "fwmcomb/params.hpp"
#include "fwmcomb/steady_state.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fwm {

struct SweepRecord {
    double omega_qe = 0.0;
    std::optional<double> volts;
    std::optional<double> ef;
    std::optional<double> en_12, en_13, en_23;
    std::optional<double> ep_1, ep_2, ep_3;
    bool stable = false;
    std::optional<double> residual_norm;

    bool operator==(const SweepRecord&) const = default;
};

struct SweepAxis {
    std::string name = "omega_qe";
    double from = 1.8;
    double to = 1.8005;
    int steps = 101;
};

class SweepError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool is_sweep_axis(const std::string& name);
std::vector<double> axis_grid(const SweepAxis& axis);
SystemParams apply_axis(const SystemParams& p, const std::string& name, double value);

struct PointResult {
    SweepRecord record;
    std::optional<SteadyState> state;
    std::optional<Mat12> drift;
    std::optional<CovarianceMatrix> intracavity;
    std::optional<CovarianceMatrix> output;
    double lyapunov_residual = 0.0;
    double uncertainty_margin = 0.0;
    std::array<double, 3> intracavity_en{};
    std::string error;
};

// Full pipeline at one parameter point. `reference` is |alpha_a3(f=0)|^2.
PointResult evaluate_point(const SystemParams& p, const std::optional<SteadyState>& guess, double reference,
                           const SolveOptions& opts = {});

struct SweepOptions {
    // 1: sequential, warm-started in grid order. >1: cold-started points on a thread pool.
    int threads = 1;
    SolveOptions solve{};
};

struct SweepResult {
    std::string axis;
    std::vector<double> values;
    std::vector<PointResult> points;
    int failures = 0;

    std::vector<SweepRecord> records() const;
};

SweepResult run_sweep(const SystemParams& p, const SweepAxis& axis, const SweepOptions& opts = {});
SweepResult run_sweep_values(const SystemParams& p, const std::string& axis, const std::vector<double>& values,
                             const SweepOptions& opts = {});

// Output.
enum class Format { csv, json };

struct RunManifest {
    std::string tool = "fwmcomb";
    std::string version;
    std::string config_hash;
    std::optional<SweepAxis> axis;
};

RunManifest make_manifest(const SystemParams& p, const std::optional<SweepAxis>& axis);

inline constexpr const char* kCsvHeader =
    "omega_qe,volts,ef,en_12,en_13,en_23,ep_1,ep_2,ep_3,stable,residual_norm";

std::string to_csv(const std::vector<SweepRecord>& records);
std::string to_json(const std::vector<SweepRecord>& records, const RunManifest& manifest);
std::vector<SweepRecord> parse_csv(const std::string& text);
void emit(const std::vector<SweepRecord>& records, Format format, const std::string& path,
          const RunManifest& manifest);

// Calibration.
struct CalibrationTargets {
    double ef_dip_max = 1e-3;
    double ef_peak_min = 10.0;
};

struct CalibrationOptions {
    // Window relative to omega3.
    double window_from = 0.0;
    double window_to = 0.0005;
    int steps = 101;
    double f_min = 1e-4;
    double f_max = 0.1;
    int f_points = 31;
    std::vector<double> drive_factors{1.0, 0.5, 2.0, 0.25, 4.0};
    int bisection_iterations = 40;
    // The EF maximum must lie in this central fraction of the window.
    double central_fraction = 0.5;
};

struct CalibrationResult {
    SystemParams params;
    bool achieved = false;
    double ef_dip = 0.0;
    double ef_peak = 0.0;
    double peak_omega_qe = 0.0;
    int argmin = -1;
    int argmax = -1;
    double drive_factor = 1.0;
    std::string report;
};

struct EfCurve {
    std::vector<double> omega_qe;
    std::vector<std::optional<double>> ef;
};

EfCurve ef_curve(const SystemParams& p, const std::vector<double>& omega_qe, double reference,
                 const SolveOptions& opts = {});

CalibrationResult calibrate_defaults(const SystemParams& base, const CalibrationTargets& targets,
                                     const CalibrationOptions& opts = {});

}  // namespace fwm
