#ifndef NMM_TOOLS_COMMON_HPP
#define NMM_TOOLS_COMMON_HPP

#include <map>
#include <string>

#include "json.hpp"
#include "nmm/util.hpp"

namespace nmmcli {

// Exit codes shared by all subcommands.
inline constexpr int exit_ok = 0;
inline constexpr int exit_numerical = 2;
inline constexpr int exit_precision = 3;
inline constexpr int exit_usage = 64;

/// Resolved run parameters in canonical form: the same map feeds the
/// determinism hash and the metadata echo, so identical configurations are
/// guaranteed identical outputs.
struct RunMeta {
    std::string command;
    std::map<std::string, std::string> config;

    std::string config_hash() const;
    nlohmann::json to_json() const;
    std::vector<std::pair<std::string, std::string>> csv_lines() const;
};

std::string format_param(double value);

nlohmann::json complex_json(nmm::cplx z);

/// Writes stderr machine-readable diagnostics and returns the exit code.
int fail_json(int code, const std::string& kind, const nlohmann::json& extra = {});

}

#endif
