#pragma once

// Batch front end. run_cli() parses arguments, dispatches one of the four
// subcommands and maps failures onto the exit-code contract below; the
// kendall_cli executable is a thin wrapper around it.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kendall/bivariate_models.hpp"
#include "kendall/rank_core.hpp"

namespace kendall::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitAssertionFailed = 3;

/// Environment variable consulted for the default seed; --seed wins.
inline constexpr const char* kSeedEnvVar = "KENDALL_SEED";
inline constexpr std::uint64_t kDefaultSeed = 42;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Tau, Theoretical, Simulate, Report };
enum class OutputFormat { Table, Csv, Json };

struct RunConfig {
  Command command = Command::Tau;
  std::optional<std::string> input_path;
  std::optional<ModelParams> model;
  std::size_t n = 1000;
  std::size_t reps = 200;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::size_t> n_list;
  std::vector<double> epsilons;
  std::size_t draws = 1'000'000;
  OutputFormat format = OutputFormat::Table;
  std::optional<std::string> plot_path;
  std::optional<std::string> output_path;
  unsigned threads = 1;
};

/// Throws UsageError for unknown flags, malformed values or missing
/// command-specific fields. Returns nullopt when help was requested (the help
/// text is written to out).
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv,
                                            std::ostream& out);

std::string command_name(Command command);

/// Reads two numeric columns (x, y). One leading non-numeric header line is
/// allowed; blank lines are skipped. Errors carry the 1-based line number.
BivariateSample read_sample_csv(const std::string& path);
BivariateSample parse_sample_csv(std::istream& in);

int cmd_tau(const RunConfig& config, std::ostream& out);
int cmd_theoretical(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, std::ostream& out);
int cmd_report(const RunConfig& config, std::ostream& out);

/// Full pipeline with diagnostics on err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct SpreadPoint {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
};

/// Mean +/- one standard deviation of tau_n against log n, with a horizontal
/// reference line at tau.
std::string render_spread_svg(const std::vector<SpreadPoint>& points, double reference,
                              const std::string& title);

}  // namespace kendall::cli
