#include "fwmcomb/config_io.hpp"
#include "fwmcomb/fluctuations.hpp"
#include "fwmcomb/measures.hpp"
#include "fwmcomb/steady_state.hpp"
#include "fwmcomb/sweep.hpp"
#include "fwmcomb/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

enum Exit { kOk = 0, kUsage = 1, kSolver = 2, kIo = 3 };

using fwm::format_double;

std::string cplx_json(fwm::cplx z) { return "[" + format_double(z.real()) + ", " + format_double(z.imag()) + "]"; }

void write_output(const std::string& text, const std::string& path)
{
    if (path.empty() || path == "-")
        std::cout << text;
    else
        fwm::write_file(path, text);
}

int thread_count(int flag)
{
    if (flag > 0) return flag;
    if (const char* env = std::getenv("FWMCOMB_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
        throw fwm::ConfigError("FWMCOMB_THREADS must be a positive integer");
    }
    return 1;
}

std::string steady_json(const fwm::SystemParams& p, const fwm::SteadyState& s, double ef)
{
    std::string o = "{\n";
    for (int i = 0; i < 3; ++i) o += "  \"alpha_c" + std::to_string(i + 1) + "\": " + cplx_json(s.alpha_c[i]) + ",\n";
    for (int i = 0; i < 3; ++i) o += "  \"alpha_a" + std::to_string(i + 1) + "\": " + cplx_json(s.alpha_a[i]) + ",\n";
    o += "  \"rho_ge\": " + cplx_json(s.rho_ge) + ",\n";
    o += "  \"rho_ee\": " + format_double(s.rho_ee) + ",\n";
    o += "  \"omega_qe\": " + format_double(p.omega_qe) + ",\n";
    o += "  \"ef\": " + format_double(ef) + ",\n";
    o += "  \"residual_norm\": " + format_double(s.residual_norm) + ",\n";
    o += "  \"iterations\": " + std::to_string(s.iterations) + ",\n";
    o += std::string("  \"multistable\": ") + (s.multistable ? "true" : "false") + "\n}\n";
    return o;
}

std::string measures_json(const fwm::SystemParams& p, const fwm::PointResult& pr)
{
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("null"); };
    const auto& r = pr.record;
    std::string o = "{\n";
    o += "  \"omega_qe\": " + format_double(p.omega_qe) + ",\n";
    o += "  \"ef\": " + opt(r.ef) + ",\n";
    o += std::string("  \"stable\": ") + (r.stable ? "true" : "false") + ",\n";
    if (pr.drift) {
        const auto st = fwm::stability(*pr.drift);
        o += "  \"max_real_eigenvalue\": " + format_double(st.max_real) + ",\n";
    }
    if (r.stable) {
        o += "  \"lyapunov_residual\": " + format_double(pr.lyapunov_residual) + ",\n";
        o += "  \"uncertainty_margin\": " + format_double(pr.uncertainty_margin) + ",\n";
        o += "  \"intracavity_en\": {\"12\": " + format_double(pr.intracavity_en[0]) +
             ", \"13\": " + format_double(pr.intracavity_en[1]) +
             ", \"23\": " + format_double(pr.intracavity_en[2]) + "},\n";
    }
    o += "  \"output_en\": {\"12\": " + opt(r.en_12) + ", \"13\": " + opt(r.en_13) + ", \"23\": " + opt(r.en_23) +
         "},\n";
    o += "  \"entanglement_potential\": {\"1\": " + opt(r.ep_1) + ", \"2\": " + opt(r.ep_2) +
         ", \"3\": " + opt(r.ep_3) + "},\n";
    o += std::string("  \"log_base\": ") + (p.log_base == fwm::LogBase::two ? "\"2\"" : "\"e\"");
    if (!pr.error.empty()) o += ",\n  \"error\": " + nlohmann::json(pr.error).dump();
    o += "\n}\n";
    return o;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cavity-plasmon-emitter four-wave-mixing simulator"};
    app.set_version_flag("--version", std::string(fwm::kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_path;
    app.add_option("--config", config_path, "JSON parameter file (built-in calibrated default if omitted)");

    auto* steady = app.add_subcommand("steady", "Solve the mean-field steady state and report EF");
    steady->add_option("--out", out_path, "Output file (stdout if omitted)");

    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and emit EF and entanglement curves");
    std::string axis = "omega_qe";
    std::optional<double> from, to;
    int steps = 101;
    std::string format = "csv";
    int parallel = 0;
    sweep->add_option("--axis", axis, "omega_qe, volts, f, chi_fwm, eps_l1 or eps_l2")
        ->check(CLI::IsMember({"omega_qe", "volts", "f", "chi_fwm", "eps_l1", "eps_l2"}));
    sweep->add_option("--from", from, "Axis start (omega_qe default: omega3)");
    sweep->add_option("--to", to, "Axis end (omega_qe default: omega3 + 0.0005)");
    sweep->add_option("--steps", steps, "Grid points")->check(CLI::Range(2, 1000000));
    sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--out", out_path, "Output file (stdout if omitted)");
    sweep->add_option("--parallel", parallel, "Worker threads (cold-started points); env FWMCOMB_THREADS")
        ->check(CLI::PositiveNumber);

    auto* calibrate = app.add_subcommand("calibrate", "Calibrate f and drive against EF dip/peak targets");
    fwm::CalibrationTargets targets;
    calibrate->add_option("--dip-max", targets.ef_dip_max, "Upper bound on EF at omega_qe = omega3");
    calibrate->add_option("--peak-min", targets.ef_peak_min, "Lower bound on max EF over the window");
    calibrate->add_option("--out", out_path, "Calibrated config file (stdout if omitted)");

    auto* measures = app.add_subcommand("measures", "Stability, covariance and entanglement at one point");
    measures->add_option("--out", out_path, "Output file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        const fwm::SystemParams p = config_path.empty() ? fwm::default_params() : fwm::load_params(config_path);

        if (*steady) {
            const fwm::SteadyState s = fwm::solve_steady_state(p);
            const double ef = fwm::enhancement_factor(s, fwm::reference_intensity(p));
            write_output(steady_json(p, s, ef), out_path);
        } else if (*sweep) {
            fwm::SweepAxis ax;
            ax.name = axis;
            ax.steps = steps;
            if (axis == "omega_qe") {
                ax.from = from.value_or(p.omega3);
                ax.to = to.value_or(p.omega3 + 0.0005);
            } else if (axis == "volts") {
                ax.from = from.value_or(0.0);
                ax.to = to.value_or(0.0005 / p.volt_slope);
            } else {
                if (!from || !to) throw fwm::ConfigError("--from and --to are required for axis " + axis);
                ax.from = *from;
                ax.to = *to;
            }
            fwm::SweepOptions so;
            so.threads = thread_count(parallel);
            const fwm::SweepResult res = fwm::run_sweep(p, ax, so);
            const auto records = res.records();
            const auto manifest = fwm::make_manifest(p, ax);
            const std::string text = format == "json" ? fwm::to_json(records, manifest) : fwm::to_csv(records);
            write_output(text, out_path);
            if (res.failures > 0)
                std::cerr << "warning: " << res.failures << " of " << records.size() << " points failed\n";
        } else if (*calibrate) {
            const fwm::CalibrationResult r = fwm::calibrate_defaults(p, targets);
            write_output(fwm::config_to_json(r.params), out_path);
            std::cerr << r.report << "\n";
            return r.achieved ? kOk : kSolver;
        } else if (*measures) {
            const fwm::PointResult pr = fwm::evaluate_point(p, std::nullopt, fwm::reference_intensity(p));
            write_output(measures_json(p, pr), out_path);
            if (!pr.record.ef) return kSolver;
        }
    } catch (const fwm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const fwm::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kSolver;
    }
    return kOk;
}
