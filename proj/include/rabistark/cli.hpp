#pragma once

// Command-line front end: argument parsing and sweep orchestration. The
// tools/ executable is a thin wrapper; everything here is testable in-process.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rabistark/model.hpp"
#include "rabistark/sweep.hpp"

namespace rabistark::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitDivergence = 4;

enum class Subcommand { Spectrum, ScanG, ScanU, CollapseCheck, ErrorMap, Staircase, CoLadder };
enum class OutputFormat { Csv, Json };

[[nodiscard]] std::string_view to_string(Subcommand s) noexcept;
[[nodiscard]] Subcommand parse_subcommand(std::string_view name);

struct ScanSpec {
  SweepParam param = SweepParam::G;
  GridSpec grid{};
};

/// Parses "<param>=<start>:<stop>:<step>", e.g. "u=0:2.2:0.01".
[[nodiscard]] ScanSpec parse_scan(std::string_view text);

struct SweepSpec {
  Subcommand subcommand = Subcommand::Spectrum;
  /// Couplings in units of omega; params.omega stays 1.
  ModelParams params{};
  /// Multiplies every energy column on output.
  double energy_scale = 1.0;
  std::vector<ScanSpec> scans;
  std::size_t levels = 10;
  double tol = 1e-8;
  /// Fixed cutoff (classified against half of it); nullopt selects the doubling schedule.
  std::optional<std::size_t> cutoff;
  std::size_t max_cutoff = std::size_t{1} << 19;
  /// Empty or "-" writes to the output stream passed to run().
  std::string out_path;
  OutputFormat format = OutputFormat::Csv;
  /// 0 picks the hardware concurrency.
  unsigned workers = 0;

  /// Throws ValidationError on inconsistent combinations (scan count per
  /// subcommand, grids, model requirements).
  void validate() const;
  [[nodiscard]] const ScanSpec* find_scan(SweepParam p) const;
};

struct ParseOutcome {
  std::optional<SweepSpec> spec;
  /// Set when parsing ends the program (help, version or an error).
  int exit_code = kExitOk;
  std::string message;
};

/// Parses arguments without the program name.
[[nodiscard]] ParseOutcome parse_command_line(const std::vector<std::string>& args);

/// Runs a validated spec, writing records to spec.out_path (or out when the
/// path is empty / "-") and diagnostics to diag. Returns the exit status.
int run(const SweepSpec& spec, std::ostream& out, std::ostream& diag);

/// Full command-line entry: parse then run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& diag);

}  // namespace rabistark::cli
