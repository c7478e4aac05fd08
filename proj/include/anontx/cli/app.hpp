#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "anontx/bits.hpp"

namespace anontx::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kProtocolAbort = 3,
  kVerdictFailure = 4,
};

/// Environment variable naming the directory for JSON reports when --out is
/// not given.
inline constexpr const char* kOutDirEnv = "ANONTX_OUT_DIR";

struct RunConfig {
  std::string command;
  int n = 0;
  std::optional<std::uint64_t> seed;
  int trials = 10000;
  std::optional<PlayerId> sender;
  std::optional<PlayerId> receiver;
  PlayerSet wishers;
  PlayerSet colluders;
  PlayerSet withhold;
  std::optional<int> t;
  /// Data bit; `verdict` defaults to 1, everything else to 0.
  std::optional<int> d;
  std::string alpha = "1";
  std::string beta = "0";
  std::string protocol = "anon";
  std::string target = "sender";
  std::string mode = "exact";
  bool traceless = false;
  std::string topology = "complete";
  std::string graph_file;
  int max_backoff = 4;
  std::string out;
  // sweep
  std::string kind;
  int n_min = 2;
  int n_max = 16;
  int threads = 0;
};

/// Parses argv and executes. Summary lines go to `out`, machine-readable
/// errors to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

/// Executes an already-parsed config.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// CSV for a sweep; one row per cell, cells evaluated concurrently.
std::string sweep_csv(const RunConfig& config);

/// Per-cell stream id: hash of the base seed and the cell coordinates.
std::uint64_t cell_stream_id(std::uint64_t seed,
                             const std::vector<std::int64_t>& coords);

/// Writes `contents` to `path` through a temporary file and a rename.
void write_atomically(const std::string& path, const std::string& contents);

}  // namespace anontx::cli
