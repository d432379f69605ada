#include "fwmcomb/config_io.hpp"
#include "fwmcomb/sweep.hpp"
#include "fwmcomb/version.hpp"

#include <json.hpp>

#include <charconv>
#include <sstream>

namespace fwm {

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string opt_json(const std::optional<double>& v) { return v ? format_double(*v) : std::string("null"); }

std::optional<double> parse_field(const std::string& s, int line)
{
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw IoError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
    return v;
}

}  // namespace

RunManifest make_manifest(const SystemParams& p, const std::optional<SweepAxis>& axis)
{
    RunManifest m;
    m.version = kVersion;
    m.config_hash = "fnv1a64:" + hash_hex(config_hash(p));
    m.axis = axis;
    return m;
}

std::string to_csv(const std::vector<SweepRecord>& records)
{
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : records) {
        out += format_double(r.omega_qe) + ',' + opt(r.volts) + ',' + opt(r.ef) + ',' + opt(r.en_12) + ',' +
               opt(r.en_13) + ',' + opt(r.en_23) + ',' + opt(r.ep_1) + ',' + opt(r.ep_2) + ',' + opt(r.ep_3) +
               ',' + (r.stable ? "true" : "false") + ',' + opt(r.residual_norm) + '\n';
    }
    return out;
}

std::vector<SweepRecord> parse_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw IoError("csv: unexpected header");
    std::vector<SweepRecord> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 11) throw IoError("csv line " + std::to_string(lineno) + ": expected 11 fields");
        SweepRecord r;
        const auto w = parse_field(f[0], lineno);
        if (!w) throw IoError("csv line " + std::to_string(lineno) + ": missing omega_qe");
        r.omega_qe = *w;
        r.volts = parse_field(f[1], lineno);
        r.ef = parse_field(f[2], lineno);
        r.en_12 = parse_field(f[3], lineno);
        r.en_13 = parse_field(f[4], lineno);
        r.en_23 = parse_field(f[5], lineno);
        r.ep_1 = parse_field(f[6], lineno);
        r.ep_2 = parse_field(f[7], lineno);
        r.ep_3 = parse_field(f[8], lineno);
        if (f[9] != "true" && f[9] != "false")
            throw IoError("csv line " + std::to_string(lineno) + ": stable must be true or false");
        r.stable = f[9] == "true";
        r.residual_norm = parse_field(f[10], lineno);
        out.push_back(r);
    }
    return out;
}

std::string to_json(const std::vector<SweepRecord>& records, const RunManifest& m)
{
    using nlohmann::json;
    std::string out = "{\n  \"manifest\": {\n";
    out += "    \"tool\": " + json(m.tool).dump() + ",\n";
    out += "    \"version\": " + json(m.version).dump() + ",\n";
    out += "    \"config_hash\": " + json(m.config_hash).dump();
    if (m.axis) {
        out += ",\n    \"axis\": {\"name\": " + json(m.axis->name).dump() + ", \"from\": " +
               format_double(m.axis->from) + ", \"to\": " + format_double(m.axis->to) +
               ", \"steps\": " + std::to_string(m.axis->steps) + "}";
    }
    out += "\n  },\n  \"records\": [";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        out += i ? ",\n    {" : "\n    {";
        out += "\"omega_qe\": " + format_double(r.omega_qe);
        out += ", \"volts\": " + opt_json(r.volts);
        out += ", \"ef\": " + opt_json(r.ef);
        out += ", \"en_12\": " + opt_json(r.en_12);
        out += ", \"en_13\": " + opt_json(r.en_13);
        out += ", \"en_23\": " + opt_json(r.en_23);
        out += ", \"ep_1\": " + opt_json(r.ep_1);
        out += ", \"ep_2\": " + opt_json(r.ep_2);
        out += ", \"ep_3\": " + opt_json(r.ep_3);
        out += std::string(", \"stable\": ") + (r.stable ? "true" : "false");
        out += ", \"residual_norm\": " + opt_json(r.residual_norm) + "}";
    }
    out += records.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

void emit(const std::vector<SweepRecord>& records, Format format, const std::string& path,
          const RunManifest& manifest)
{
    if (records.empty()) throw IoError("emit: no records");
    write_file(path, format == Format::csv ? to_csv(records) : to_json(records, manifest));
}

}  // namespace fwm
