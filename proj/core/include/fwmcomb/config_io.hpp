#pragma once

#include "fwmcomb/params.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fwm {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat JSON object: numbers, [re, im] pairs for couplings, strings.
ConfigMap parse_config(const std::string& json_text);
ConfigMap load_config(const std::string& path);
SystemParams load_params(const std::string& path);

std::string config_to_json(const SystemParams& p);
void save_config(const SystemParams& p, const std::string& path);

// 17 significant digits, locale independent.
std::string format_double(double v);

// FNV-1a 64 over the canonical JSON of the parameters.
std::uint64_t config_hash(const SystemParams& p);
std::string hash_hex(std::uint64_t h);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace fwm
