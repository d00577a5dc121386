// SPDX-License-Identifier: Apache-2.0
//
// Batch front end: JSON scenario configs, subcommand dispatch and run
// manifests. Physical quantities carry their unit in the key name.
#pragma once

#include "risbeam/sim.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace risbeam {

inline constexpr const char* kVersion = "0.1.0";

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses and validates a scenario document. Relative paths inside the
/// document (design.profile_csv) are resolved against `base_dir`.
/// Syntax errors report line and column; schema errors name the key path.
Scenario parse_config(const std::string& text, const std::string& base_dir = "");

/// The effective scenario with every default filled in; parse_config of the
/// dump yields the same scenario.
std::string dump_config(const Scenario& s);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes);

const std::vector<std::string>& subcommands();

struct RunConfig {
    std::string subcommand;
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    int workers = 1;
    bool verbose = false;
};

enum class ExitCode : int {
    Ok = 0,
    Internal = 1,
    Usage = 2,
    Config = 3,
    Io = 4,
    Solver = 5,
    Domain = 6,
};

/// Runs one subcommand. Errors are reported on `err` as a single line
/// `risbeam: error[<category>]: <message>` and mapped to an ExitCode.
int dispatch(const RunConfig& rc, std::ostream& out, std::ostream& err);

}  // namespace risbeam
