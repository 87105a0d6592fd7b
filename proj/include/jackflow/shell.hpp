#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jackflow/theta.hpp"

namespace jackflow::shell {

/// Bad configuration value; what() names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : std::invalid_argument("config key '" + key + "': " + message), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Every tunable of the CLI. Keys in config files and flags share names
/// (flags use '-' where keys use '_').
struct RunConfig {
  int n = 3;
  std::optional<double> theta;
  std::optional<double> beta;
  double time = 1.0;      // real time t (variance for samplers)
  double epsilon = 1.0;   // lattice scale; chain time is t/(εθ)
  std::size_t paths = 1;  // trajectories or samples
  std::uint64_t seed = 0;
  std::string out = "jackflow-out";
  std::string format = "csv";
  double dt = 1e-3;
  double delta = 1e-4;
  std::vector<double> snapshots;  // extra real times within [0, time]
  int workers = 0;
  double start_variance = 1.0;  // corners start of `sde multilevel`
  std::string partition;        // λ for `jack eval`
  double s = 1.0;               // Plancherel parameter for `jack eval`

  /// θ after reconciling theta and beta (default 1).
  Theta resolved_theta() const;
  /// Cross-field checks (β = 2θ, snapshot range). Throws ConfigError.
  void validate() const;
};

/// Known keys, in echo order.
const std::vector<std::string>& config_keys();

/// Sets one key from its textual value, with type and range checks.
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);

/// Flat "key = value" file; '#' starts a comment. Unknown keys, bad types and
/// out-of-range values raise ConfigError.
RunConfig load_config(const std::string& path);
RunConfig parse_config(std::string_view text);

/// Textual value of a key as echoed into manifests (17 significant digits).
std::string config_value(const RunConfig& cfg, std::string_view key);

/// Entry point of the jackflow executable. Returns the process exit code:
/// 2 for bad arguments, 1 for failed verification or a failed run, 0 otherwise.
int cli_dispatch(int argc, const char* const* argv);
int cli_dispatch(const std::vector<std::string>& args);

/// 64-bit FNV-1a of a byte string.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace jackflow::shell
