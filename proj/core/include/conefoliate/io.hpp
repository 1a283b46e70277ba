#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace conefoliate {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitCertificate = 3;

/// Configuration rejected before any computation.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A computation finished but its certificate does not hold.
struct CertificateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> subcommand_names();

/// 17 significant digits.
std::string format17(double v);

/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Command-line overrides of the global config fields.
struct GlobalOverrides {
    std::optional<std::string> output_dir;
    std::optional<long long> seed;
    std::optional<int> threads;
};

/// Thread count: config value, then CONEFOLIATE_THREADS, then the override.
int resolve_threads(int config_value, std::optional<int> override_value = std::nullopt);

/// Validates `config_json` for the subcommand, runs it and writes its
/// artifacts. Returns the process exit code; messages go to `log`.
int run_command(const std::string& subcommand, const std::string& config_json,
                const GlobalOverrides& overrides, std::ostream& log);

}  // namespace conefoliate
