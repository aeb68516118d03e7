#include <charconv>
#include <cstdlib>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "kendall/cli.hpp"

namespace kendall::cli {

namespace {

struct RawFlags {
  std::string family;
  double t = 1.0;
  double alpha = 0.0;
  std::size_t n = 1000;
  std::size_t reps = 200;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> n_list;
  std::vector<double> epsilons;
  std::size_t draws = 1'000'000;
  std::string format = "table";
  std::string plot;
  std::string output;
  std::string input;
  unsigned threads = 1;
  bool n_list_given = false;
};

void add_flags(CLI::App& sub, RawFlags& flags) {
  sub.add_option("--family", flags.family, "exp-pareto, pareto or fgm");
  sub.add_option("--t", flags.t, "shape t > 0 (exp-pareto, pareto)");
  sub.add_option("--alpha", flags.alpha, "dependence alpha in [-1, 1] (fgm)");
  sub.add_option("--n", flags.n, "sample size per replication");
  sub.add_option("--reps", flags.reps, "replication count R");
  sub.add_option("--n-list", flags.n_list, "comma-separated sample sizes")->delimiter(',');
  sub.add_option("--eps", flags.epsilons, "comma-separated exceedance thresholds")
      ->delimiter(',');
  sub.add_option("--draws", flags.draws, "Monte Carlo draws for theoretical tau");
  sub.add_option("--seed", flags.seed, fmt::format("master seed (default ${} or {})",
                                                  kSeedEnvVar, kDefaultSeed));
  sub.add_option("--format", flags.format, "table|csv|json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  sub.add_option("--plot", flags.plot, "write an SVG plot (report)");
  sub.add_option("--output", flags.output, "write the report here instead of stdout");
  sub.add_option("--input", flags.input, "two-column CSV of (x, y)");
  sub.add_option("--threads", flags.threads, "worker threads for replications")
      ->check(CLI::Range(1u, 256u));
}

std::uint64_t seed_from_environment() {
  const char* raw = std::getenv(kSeedEnvVar);
  if (raw == nullptr || *raw == '\0') return kDefaultSeed;
  std::uint64_t value = 0;
  const std::string_view text(raw);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(fmt::format("{}='{}' is not an unsigned integer", kSeedEnvVar, text));
  }
  return value;
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  return OutputFormat::Table;
}

}  // namespace

std::string command_name(Command command) {
  switch (command) {
    case Command::Tau:
      return "tau";
    case Command::Theoretical:
      return "theoretical";
    case Command::Simulate:
      return "simulate";
    case Command::Report:
      return "report";
  }
  return "unknown";
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv,
                                            std::ostream& out) {
  CLI::App app{"Kendall rank correlation via concomitants: sample statistics, theoretical "
               "tau and replication experiments"};
  app.require_subcommand(1);
  RawFlags flags;
  struct Entry {
    Command command;
    const char* help;
  };
  const Entry entries[] = {
      {Command::Tau, "tau_n and rho_n of a two-column CSV file"},
      {Command::Theoretical, "closed-form, Monte Carlo and quadrature tau of a model"},
      {Command::Simulate, "replicate tau_n and rho_n on samples drawn from a model"},
      {Command::Report, "unbiasedness and convergence tables with PASS/FAIL checks"},
  };
  std::vector<std::pair<Command, CLI::App*>> subs;
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(command_name(e.command), e.help);
    add_flags(*sub, flags);
    subs.emplace_back(e.command, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig config;
  const CLI::App* chosen = nullptr;
  for (const auto& [command, sub] : subs) {
    if (sub->parsed()) {
      config.command = command;
      chosen = sub;
    }
  }
  flags.n_list_given = chosen->count("--n-list") > 0;

  if (!flags.family.empty()) {
    ModelParams params;
    try {
      params.family = parse_family(flags.family);
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
    params.t = flags.t;
    params.alpha = flags.alpha;
    config.model = params;
  }
  if (!flags.input.empty()) config.input_path = flags.input;
  if (!flags.plot.empty()) config.plot_path = flags.plot;
  if (!flags.output.empty()) config.output_path = flags.output;
  config.n = flags.n;
  config.reps = flags.reps;
  config.seed = flags.seed ? *flags.seed : seed_from_environment();
  config.n_list = flags.n_list;
  config.epsilons = flags.epsilons;
  config.draws = flags.draws;
  config.format = parse_format(flags.format);
  config.threads = flags.threads;

  const std::string name = command_name(config.command);
  if (config.command == Command::Tau && !config.input_path) {
    throw UsageError("tau requires --input");
  }
  if (config.command != Command::Tau && !config.model) {
    throw UsageError(name + " requires --family");
  }
  if (config.command == Command::Report && config.n_list.empty()) {
    throw UsageError(flags.n_list_given ? "report requires a non-empty --n-list"
                                        : "report requires --n-list");
  }
  if (config.reps < 1) throw UsageError("--reps must be at least 1");
  for (const double eps : config.epsilons) {
    if (!(eps > 0.0)) throw UsageError("--eps values must be positive");
  }
  if (config.model) {
    try {
      validate(*config.model);
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
  }
  return config;
}

}  // namespace kendall::cli
