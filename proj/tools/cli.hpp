#pragma once

// Batch front-end: each subcommand reads one JSON config and produces a
// table (CSV) or a JSON document.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfsphoton/serialization.hpp"

namespace dfsphoton::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// Bad or missing config field. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { kCsv, kJson };

struct RunConfig {
  std::string command;
  Json document = Json::object();
  std::optional<std::string> out_path;
  Format format = Format::kJson;
  int jobs = 1;
};

/// Header cells carry unit tags, e.g. "delta_e[gamma_1d]".
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write_csv(std::ostream& out) const;
};

struct CommandOutput {
  Table table;
  Json json;
  /// Raw CSV body that replaces `table` (wavepacket grids stream their own).
  std::optional<std::string> csv_override;
};

/// Parses the config text. Throws ConfigError on malformed JSON.
Json parse_config(const std::string& text);

PhysicalParams params_from_json(const Json& j);
TargetSuperposition target_from_json(const Json& j);
std::string target_label(const Json& j);
ProtocolSettings protocol_from_json(const Json& j);
WaveguideSpec waveguide_from_json(const Json& j);

CommandOutput cmd_simulate(const RunConfig& config);
CommandOutput cmd_sweep(const RunConfig& config);
CommandOutput cmd_plan(const RunConfig& config);
CommandOutput cmd_photon(const RunConfig& config);
CommandOutput cmd_analytic(const RunConfig& config);
CommandOutput cmd_feasibility(const RunConfig& config);

CommandOutput dispatch(const RunConfig& config);
void write_output(const CommandOutput& output, Format format, std::ostream& out);

/// Full command-line entry point; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace dfsphoton::cli
