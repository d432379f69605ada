#pragma once

#include <array>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>

namespace fwm {

using cplx = std::complex<double>;

// hbar * omega1 = 1.24 eV, a 1 um optical pump.
inline constexpr double kHbarEvS = 6.582119569e-16;
inline constexpr double kPumpPhotonEv = 1.24;
inline constexpr double kDefaultOmega1Hz = kPumpPhotonEv / kHbarEvS;
// 10 meV of emitter shift per volt.
inline constexpr double kDefaultVoltSlope = 0.010 / kPumpPhotonEv;

enum class LogBase { natural, two };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// All frequencies and rates in units of omega1.
struct SystemParams {
    double omega1 = 1.0;
    double omega2 = 0.2;
    double omega3 = 1.8;
    std::array<double, 3> omega_c{};
    std::array<double, 3> omega_a{};
    double omega_qe = 1.8;
    std::array<cplx, 3> g{};
    double f = 0.0;
    double chi_fwm = 0.0;
    double eps_l1 = 0.0;
    double eps_l2 = 0.0;
    std::array<double, 3> kappa{};
    std::array<double, 3> gamma{};
    std::array<double, 3> gamma_noise{};
    double gamma_eg = 1e-6;
    double gamma_ee = 2e-6;
    std::array<double, 3> r{};
    double volt_anchor = 1.8;
    double volt_slope = kDefaultVoltSlope;
    double omega1_hz = kDefaultOmega1Hz;
    LogBase log_base = LogBase::natural;
    std::string provenance;
};

struct Detunings {
    std::array<double, 3> c{};
    std::array<double, 3> a{};
    double qe = 0.0;
};

using ConfigValue = std::variant<double, cplx, std::string>;
using ConfigMap = std::map<std::string, ConfigValue>;

// Keys without a built-in default; every other key falls back to the
// physical rates of the device.
const std::array<const char*, 14>& required_keys();

SystemParams make_params(const ConfigMap& config);
ConfigMap to_config(const SystemParams& p);
void validate(const SystemParams& p);

Detunings detunings(const SystemParams& p);
double volt_to_omega(double volts, double anchor, double slope);

// The calibrated default device, identical to config/default.json.
SystemParams default_params();

}  // namespace fwm
