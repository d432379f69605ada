#include "fwmcomb/config_io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace fwm {

using nlohmann::json;

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

ConfigMap parse_config(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a flat JSON object");

    ConfigMap m;
    for (const auto& [key, v] : j.items()) {
        if (v.is_number()) {
            m[key] = v.get<double>();
        } else if (v.is_string()) {
            m[key] = v.get<std::string>();
        } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
            m[key] = cplx(v[0].get<double>(), v[1].get<double>());
        } else {
            throw ConfigError("unsupported value for key " + key + ": expected number, [re, im] or string");
        }
    }
    return m;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path);
    return ss.str();
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

ConfigMap load_config(const std::string& path) { return parse_config(read_file(path)); }

SystemParams load_params(const std::string& path) { return make_params(load_config(path)); }

namespace {

std::string render(const ConfigMap& m)
{
    std::string out = "{\n";
    bool first = true;
    for (const auto& [key, v] : m) {
        if (!first) out += ",\n";
        first = false;
        out += "  " + json(key).dump() + ": ";
        if (const auto* d = std::get_if<double>(&v))
            out += format_double(*d);
        else if (const auto* c = std::get_if<cplx>(&v))
            out += "[" + format_double(c->real()) + ", " + format_double(c->imag()) + "]";
        else
            out += json(std::get<std::string>(v)).dump();
    }
    out += "\n}\n";
    return out;
}

}  // namespace

std::string config_to_json(const SystemParams& p) { return render(to_config(p)); }

void save_config(const SystemParams& p, const std::string& path) { write_file(path, config_to_json(p)); }

std::uint64_t config_hash(const SystemParams& p)
{
    ConfigMap m = to_config(p);
    m.erase("provenance");
    const std::string s = render(m);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h)
{
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return buf;
}

}  // namespace fwm
