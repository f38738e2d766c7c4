#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tauberkit/tauber.hpp"

namespace tk::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_precision = 3, exit_check_failed = 4 };

/// Invalid configuration; `path` names the offending field, e.g. "grids.x.count".
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& path, const std::string& msg)
        : std::runtime_error(path.empty() ? msg : path + ": " + msg), path_(path) {}
    [[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct RunOptions {
    std::string out_dir;  // empty: primary output goes to stdout
    std::string format;   // csv, json or plot; empty: config output.formats or csv
    int threads = 1;
    std::uint64_t seed = 1;
};

struct CommandResult {
    int exit_code = exit_ok;
    std::string stdout_text;
    std::vector<std::pair<std::string, std::string>> files;  // name, content
};

struct CatalogEntry {
    std::string name;
    std::string coefficients;
    std::string transform;
    tauber::SingularStructure singular;
    std::string exercises;
};

[[nodiscard]] std::vector<CatalogEntry> catalog_entries();
/// Boundary singular structure of a catalog series. Throws ConfigError for unknown names.
[[nodiscard]] tauber::SingularStructure catalog_singular(const std::string& name);
/// "{b=0, omega=0, 2Re c=1}" style rendering.
[[nodiscard]] std::string describe(const tauber::SingularStructure& s);

[[nodiscard]] CommandResult cmd_catalog();
[[nodiscard]] CommandResult cmd_bound(const std::string& config_json, const RunOptions& opt);
[[nodiscard]] CommandResult cmd_eta(const std::string& config_json, const RunOptions& opt);
[[nodiscard]] CommandResult cmd_decrease(const std::string& config_json, const RunOptions& opt);
[[nodiscard]] CommandResult cmd_lemma(const std::string& config_json, const RunOptions& opt);

/// Dispatch by name, mapping exceptions to exit codes (config 2, precision 3).
[[nodiscard]] CommandResult run_command(const std::string& name, const std::string& config_json,
                                        const RunOptions& opt);

/// Entry point of the tauberctl executable.
int main_entry(int argc, char** argv);

}  // namespace tk::cli
