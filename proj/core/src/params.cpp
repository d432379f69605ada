#include "fwmcomb/params.hpp"

#include <cmath>
#include <optional>
#include <set>

namespace fwm {

namespace {

constexpr double kKappaHz = 1e5;
constexpr double kGammaHz = 1e14;
constexpr double kGammaNoiseHz = 1e10;

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys = {
        "omega1", "omega2", "omega3", "omega1_hz",
        "omega_c1", "omega_c2", "omega_c3",
        "omega_a1", "omega_a2", "omega_a3", "omega_qe",
        "g1", "g2", "g3", "f", "chi_fwm", "eps_l1", "eps_l2",
        "kappa1", "kappa2", "kappa3",
        "gamma1", "gamma2", "gamma3",
        "gamma_noise1", "gamma_noise2", "gamma_noise3",
        "gamma_eg", "gamma_ee", "r1", "r2", "r3",
        "volt_anchor", "volt_slope", "log_base", "provenance"};
    return keys;
}

bool is_complex_key(const std::string& k) { return k == "g1" || k == "g2" || k == "g3"; }
bool is_string_key(const std::string& k) { return k == "provenance" || k == "log_base"; }

bool has_hz_suffix(const std::string& k)
{
    return k != "omega1_hz" && k.size() > 3 && k.compare(k.size() - 3, 3, "_hz") == 0;
}

// Resolves `key` or `key_hz`, converting the latter to omega1 units.
class Reader {
public:
    Reader(const ConfigMap& cfg, double omega1_hz) : cfg_(cfg), hz_(omega1_hz) {}

    std::optional<cplx> get(const std::string& key) const
    {
        auto plain = cfg_.find(key);
        // omega1_hz is the unit anchor, not a Hz form of omega1.
        auto hz = key == "omega1" ? cfg_.end() : cfg_.find(key + "_hz");
        if (plain != cfg_.end() && hz != cfg_.end())
            throw ConfigError("key given both in omega1 units and in Hz: " + key);
        if (plain != cfg_.end()) return number(key, plain->second);
        if (hz != cfg_.end()) return number(key + "_hz", hz->second) / hz_;
        return std::nullopt;
    }

    double real(const std::string& key, std::optional<double> fallback) const
    {
        auto v = get(key);
        if (!v) {
            if (!fallback) throw ConfigError("missing key: " + key);
            return *fallback;
        }
        if (v->imag() != 0.0) throw ConfigError("key must be real: " + key);
        return v->real();
    }

    cplx complex(const std::string& key) const
    {
        auto v = get(key);
        if (!v) throw ConfigError("missing key: " + key);
        return *v;
    }

private:
    static cplx number(const std::string& key, const ConfigValue& v)
    {
        if (const auto* d = std::get_if<double>(&v)) return {*d, 0.0};
        if (const auto* c = std::get_if<cplx>(&v)) {
            if (!is_complex_key(key.substr(0, 2))) throw ConfigError("key must be real: " + key);
            return *c;
        }
        throw ConfigError("key must be numeric: " + key);
    }

    const ConfigMap& cfg_;
    double hz_;
};

void require_finite(double v, const std::string& name)
{
    if (!std::isfinite(v)) throw ConfigError("non-finite value: " + name);
}

void require_rate(double v, const std::string& name)
{
    require_finite(v, name);
    if (!(v > 0.0)) throw ConfigError("non-positive decay rate: " + name);
}

}  // namespace

const std::array<const char*, 14>& required_keys()
{
    static const std::array<const char*, 14> keys = {
        "omega_c1", "omega_c2", "omega_c3", "omega_a1", "omega_a2", "omega_a3",
        "omega_qe", "g1", "g2", "g3", "f", "chi_fwm", "eps_l1", "eps_l2"};
    return keys;
}

void validate(const SystemParams& p)
{
    require_finite(p.omega1, "omega1");
    require_finite(p.omega2, "omega2");
    if (!(p.omega1 > 0.0) || !(p.omega2 > 0.0))
        throw ConfigError("pump frequencies must be positive");
    if (p.omega3 != 2.0 * p.omega1 - p.omega2)
        throw ConfigError("omega3 must equal 2*omega1 - omega2");
    if (!(p.omega3 > 0.0)) throw ConfigError("omega3 = 2*omega1 - omega2 must be positive");
    for (int i = 0; i < 3; ++i) {
        const std::string n = std::to_string(i + 1);
        require_finite(p.omega_c[i], "omega_c" + n);
        require_finite(p.omega_a[i], "omega_a" + n);
        require_finite(p.g[i].real(), "g" + n);
        require_finite(p.g[i].imag(), "g" + n);
        require_finite(p.r[i], "r" + n);
        require_rate(p.kappa[i], "kappa" + n);
        require_rate(p.gamma[i], "gamma" + n);
        require_rate(p.gamma_noise[i], "gamma_noise" + n);
    }
    require_rate(p.gamma_eg, "gamma_eg");
    require_rate(p.gamma_ee, "gamma_ee");
    for (auto [v, n] : {std::pair{p.omega_qe, "omega_qe"}, {p.f, "f"}, {p.chi_fwm, "chi_fwm"},
                        {p.eps_l1, "eps_l1"}, {p.eps_l2, "eps_l2"}, {p.volt_anchor, "volt_anchor"},
                        {p.volt_slope, "volt_slope"}})
        require_finite(v, n);
    if (p.f < 0.0) throw ConfigError("f must be >= 0");
    if (p.chi_fwm < 0.0) throw ConfigError("chi_fwm must be >= 0");
    if (!(p.omega1_hz > 0.0) || !std::isfinite(p.omega1_hz))
        throw ConfigError("omega1_hz must be positive");
}

SystemParams make_params(const ConfigMap& config)
{
    for (const auto& [key, value] : config) {
        const std::string base = has_hz_suffix(key) ? key.substr(0, key.size() - 3) : key;
        if (!known_keys().count(base) || (base != key && is_string_key(base)))
            throw ConfigError("unknown key: " + key);
        if (is_string_key(key) != std::holds_alternative<std::string>(value))
            throw ConfigError(is_string_key(key) ? "key must be a string: " + key
                                                 : "key must be numeric: " + key);
    }

    SystemParams p;
    if (auto it = config.find("omega1_hz"); it != config.end()) {
        const auto* v = std::get_if<double>(&it->second);
        if (!v) throw ConfigError("key must be real: omega1_hz");
        p.omega1_hz = *v;
    }
    if (!(p.omega1_hz > 0.0) || !std::isfinite(p.omega1_hz))
        throw ConfigError("omega1_hz must be positive");

    const Reader rd(config, p.omega1_hz);
    p.omega1 = rd.real("omega1", 1.0);
    p.omega2 = rd.real("omega2", 0.2);
    p.omega3 = 2.0 * p.omega1 - p.omega2;
    if (auto w3 = rd.get("omega3")) {
        if (w3->imag() != 0.0 || std::abs(w3->real() - p.omega3) > 1e-12 * std::max(1.0, std::abs(p.omega3)))
            throw ConfigError("inconsistent omega3: expected 2*omega1 - omega2");
    }

    for (int i = 0; i < 3; ++i) {
        const std::string n = std::to_string(i + 1);
        p.omega_c[i] = rd.real("omega_c" + n, std::nullopt);
        p.omega_a[i] = rd.real("omega_a" + n, std::nullopt);
        p.g[i] = rd.complex("g" + n);
        p.kappa[i] = rd.real("kappa" + n, kKappaHz / p.omega1_hz);
        p.gamma[i] = rd.real("gamma" + n, kGammaHz / p.omega1_hz);
        p.gamma_noise[i] = rd.real("gamma_noise" + n, kGammaNoiseHz / p.omega1_hz);
    }
    p.omega_qe = rd.real("omega_qe", std::nullopt);
    p.f = rd.real("f", std::nullopt);
    p.chi_fwm = rd.real("chi_fwm", std::nullopt);
    p.eps_l1 = rd.real("eps_l1", std::nullopt);
    p.eps_l2 = rd.real("eps_l2", std::nullopt);
    p.gamma_eg = rd.real("gamma_eg", 1e-6);
    p.gamma_ee = rd.real("gamma_ee", 2e-6);
    for (int i = 0; i < 3; ++i) {
        require_rate(p.kappa[i], "kappa" + std::to_string(i + 1));
        p.r[i] = rd.real("r" + std::to_string(i + 1), std::sqrt(2.0 * p.kappa[i]));
    }
    p.volt_anchor = rd.real("volt_anchor", p.omega3);
    p.volt_slope = rd.real("volt_slope", 0.010 / kHbarEvS / p.omega1_hz);

    if (auto it = config.find("log_base"); it != config.end()) {
        const auto& s = std::get<std::string>(it->second);
        if (s == "e" || s == "natural")
            p.log_base = LogBase::natural;
        else if (s == "2")
            p.log_base = LogBase::two;
        else
            throw ConfigError("log_base must be \"e\" or \"2\"");
    }
    if (auto it = config.find("provenance"); it != config.end())
        p.provenance = std::get<std::string>(it->second);

    validate(p);
    return p;
}

ConfigMap to_config(const SystemParams& p)
{
    ConfigMap m;
    m["omega1"] = p.omega1;
    m["omega2"] = p.omega2;
    m["omega1_hz"] = p.omega1_hz;
    for (int i = 0; i < 3; ++i) {
        const std::string n = std::to_string(i + 1);
        m["omega_c" + n] = p.omega_c[i];
        m["omega_a" + n] = p.omega_a[i];
        if (p.g[i].imag() == 0.0)
            m["g" + n] = p.g[i].real();
        else
            m["g" + n] = p.g[i];
        m["kappa" + n] = p.kappa[i];
        m["gamma" + n] = p.gamma[i];
        m["gamma_noise" + n] = p.gamma_noise[i];
        m["r" + n] = p.r[i];
    }
    m["omega_qe"] = p.omega_qe;
    m["f"] = p.f;
    m["chi_fwm"] = p.chi_fwm;
    m["eps_l1"] = p.eps_l1;
    m["eps_l2"] = p.eps_l2;
    m["gamma_eg"] = p.gamma_eg;
    m["gamma_ee"] = p.gamma_ee;
    m["volt_anchor"] = p.volt_anchor;
    m["volt_slope"] = p.volt_slope;
    m["log_base"] = std::string(p.log_base == LogBase::two ? "2" : "e");
    if (!p.provenance.empty()) m["provenance"] = p.provenance;
    return m;
}

Detunings detunings(const SystemParams& p)
{
    const std::array<double, 3> w{p.omega1, p.omega2, p.omega3};
    Detunings d;
    for (int i = 0; i < 3; ++i) {
        d.c[i] = p.omega_c[i] - w[i];
        d.a[i] = p.omega_a[i] - w[i];
    }
    d.qe = p.omega_qe - p.omega3;
    return d;
}

double volt_to_omega(double volts, double anchor, double slope) { return anchor + slope * volts; }

SystemParams default_params()
{
    ConfigMap c;
    c["omega_c1"] = 1.000000000002;
    c["omega_c2"] = 0.200000000009;
    c["omega_c3"] = 1.79999999997;
    c["omega_a1"] = 1.0000315;
    c["omega_a2"] = 0.2000368;
    c["omega_a3"] = 2.1118;
    c["omega_qe"] = 1.8;
    c["g1"] = 5e-9;
    c["g2"] = 2.1e-8;
    c["g3"] = 1.16e-6;
    c["f"] = 0.011467493819258533;
    c["chi_fwm"] = 1e-3;
    c["eps_l1"] = 4.43e-4;
    c["eps_l2"] = 1.07e-4;
    c["provenance"] = std::string("calibrated default");
    return make_params(c);
}

}  // namespace fwm
