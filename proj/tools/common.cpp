#include "common.hpp"

#include <cinttypes>
#include <cstdio>
#include <iostream>

#include "nmm/serialize.hpp"
#include "nmm/version.hpp"

namespace nmmcli {

std::string RunMeta::config_hash() const {
    std::string canonical = command;
    for (const auto& [key, value] : config) canonical += "\n" + key + "=" + value;
    char buffer[24];
    std::snprintf(buffer, sizeof(buffer), "%016" PRIx64, nmm::fnv1a64(canonical));
    return buffer;
}

nlohmann::json RunMeta::to_json() const {
    nlohmann::json j;
    j["tool_version"] = nmm::version_string;
    j["command"] = command;
    j["config_hash"] = config_hash();
    j["config"] = config;
    return j;
}

std::vector<std::pair<std::string, std::string>> RunMeta::csv_lines() const {
    std::vector<std::pair<std::string, std::string>> lines;
    lines.emplace_back("tool_version", nmm::version_string);
    lines.emplace_back("command", command);
    lines.emplace_back("config_hash", config_hash());
    auto seed = config.find("seed");
    if (seed != config.end()) lines.emplace_back("seed", seed->second);
    return lines;
}

std::string format_param(double value) { return nmm::format_double(value); }

nlohmann::json complex_json(nmm::cplx z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

int fail_json(int code, const std::string& kind, const nlohmann::json& extra) {
    nlohmann::json j = extra;
    j["error"] = kind;
    std::cerr << j.dump() << "\n";
    return code;
}

}
