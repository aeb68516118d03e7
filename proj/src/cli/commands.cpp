#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "kendall/cli.hpp"
#include "kendall/experiment.hpp"
#include "kendall/theoretical_tau.hpp"

namespace kendall::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kQuadratureOrder = 16;
const std::vector<double> kDefaultReportEpsilons{0.05, 0.1};

std::string format_scalar(const Json& v, OutputFormat format) {
  if (v.is_null()) return "none";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) {
    const double d = v.get<double>();
    return format == OutputFormat::Table ? fmt::format("{:.6f}", d) : fmt::format("{}", d);
  }
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_array()) {
    std::string out;
    for (const auto& item : v) {
      if (!out.empty()) out += ',';
      out += format_scalar(item, format);
    }
    return out;
  }
  return v.dump();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = command_name(c.command);
  if (c.input_path) j["input"] = *c.input_path;
  if (c.model) {
    j["family"] = std::string(family_name(c.model->family));
    if (c.model->family == Family::Fgm) {
      j["alpha"] = c.model->alpha;
    } else {
      j["t"] = c.model->t;
    }
  }
  j["n"] = c.n;
  j["reps"] = c.reps;
  j["seed"] = c.seed;
  j["n_list"] = c.n_list;
  j["eps"] = c.epsilons;
  j["draws"] = c.draws;
  j["threads"] = c.threads;
  return j;
}

std::string config_line(const Json& config) {
  std::string line = "# config:";
  for (const auto& [key, value] : config.items()) {
    line += fmt::format(" {}={}", key, format_scalar(value, OutputFormat::Csv));
  }
  return line;
}

void emit_record(std::ostream& out, OutputFormat format, const Json& config, const Json& record) {
  switch (format) {
    case OutputFormat::Table: {
      out << config_line(config) << '\n';
      std::size_t width = 0;
      for (const auto& [key, value] : record.items()) width = std::max(width, key.size());
      for (const auto& [key, value] : record.items()) {
        out << fmt::format("{:<{}}  {}\n", key, width, format_scalar(value, format));
      }
      break;
    }
    case OutputFormat::Csv: {
      out << config_line(config) << '\n';
      std::string header, row;
      bool first = true;
      for (const auto& [key, value] : record.items()) {
        if (!first) {
          header += ',';
          row += ',';
        }
        first = false;
        header += csv_field(key);
        row += csv_field(format_scalar(value, format));
      }
      out << header << '\n' << row << '\n';
      break;
    }
    case OutputFormat::Json: {
      Json doc;
      doc["config"] = config;
      doc["result"] = record;
      out << doc.dump(2) << '\n';
      break;
    }
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError(fmt::format("cannot write output file '{}'", path));
  f << content;
  f.flush();
  if (!f) throw DataError(fmt::format("failed writing output file '{}'", path));
}

Json optional_number(const std::optional<double>& v, const std::string& otherwise) {
  if (v) return *v;
  return otherwise;
}

}  // namespace

int cmd_tau(const RunConfig& config, std::ostream& out) {
  const BivariateSample sample = read_sample_csv(config.input_path.value());
  if (sample.size() < 2) throw DataError("need at least two observations");
  const TauEstimate tau = kendall_tau_fast(sample);

  Json record;
  record["n"] = sample.size();
  record["tau_n"] = tau.value;
  record["tau_path"] = tau.path == TauPath::MergeSort ? "merge-sort"
                                                      : "naive (ties present, fast path skipped)";
  try {
    record["rho_n"] = pearson_rho_sample(sample);
  } catch (const DataError&) {
    record["rho_n"] = "degenerate";
  }
  record["x_ties"] = tau.ties.x_tie_count;
  record["y_ties"] = tau.ties.y_tie_count;
  emit_record(out, config.format, config_json(config), record);
  return kExitOk;
}

int cmd_theoretical(const RunConfig& config, std::ostream& out) {
  const auto model = make_model(config.model.value());
  const EstimateWithError mc = tau_monte_carlo(*model, config.draws, config.seed);
  const EstimateWithError survival = tau_monte_carlo_survival(*model, config.draws, config.seed);

  Json record;
  record["model"] = model->describe();
  record["tau_closed_form"] = optional_number(model->tau_closed_form(), "none");
  record["tau_monte_carlo"] = mc.value;
  record["tau_monte_carlo_se"] = mc.std_error;
  record["tau_survival_form"] = survival.value;
  record["tau_survival_form_se"] = survival.std_error;
  record["draws"] = mc.n_draws;
  if (model->support() == Support::UnitSquare) {
    record["tau_quadrature"] = tau_quadrature_unit_square(*model, kQuadratureOrder);
  } else {
    record["tau_quadrature"] = "n/a (requires unit-square support)";
  }
  record["rho_closed_form"] = optional_number(
      model->rho_closed_form(), fmt::format("undefined (requires {})", model->rho_domain()));
  emit_record(out, config.format, config_json(config), record);
  return kExitOk;
}

int cmd_simulate(const RunConfig& config, std::ostream& out) {
  const auto model = make_model(config.model.value());
  ReplicationOptions options;
  options.epsilons = config.epsilons;
  options.threads = config.threads;
  const ReplicationSummary s = run_replications(*model, config.n, config.reps, config.seed, options);
  const double z = s.z_score(s.reference_tau);

  Json record;
  record["model"] = model->describe();
  record["n"] = s.n;
  record["reps"] = s.replications;
  record["reference_tau"] = s.reference_tau;
  record["tau_mean"] = s.tau_mean;
  record["tau_std_error"] = s.tau_std_error;
  record["tau_variance"] = s.tau_variance;
  record["deviation_se"] = z;
  record["within_3se"] = std::abs(z) <= kMeanToleranceSe;
  record["rho_mean"] = optional_number(s.rho_mean, "none");
  record["rho_closed_form"] = optional_number(
      model->rho_closed_form(), fmt::format("undefined (requires {})", model->rho_domain()));
  record["rho_replications"] = s.rho_count;
  record["tie_fallbacks"] = s.tie_fallbacks;
  for (const auto& [eps, count] : s.exceed_count) {
    record[fmt::format("exceed_eps_{}", eps)] = count;
  }
  emit_record(out, config.format, config_json(config), record);
  return kExitOk;
}

int cmd_report(const RunConfig& config, std::ostream& out) {
  const auto model = make_model(config.model.value());
  const std::vector<double> epsilons =
      config.epsilons.empty() ? kDefaultReportEpsilons : config.epsilons;
  ReplicationOptions options;
  options.threads = config.threads;
  options.reference_tau = reference_tau(*model);

  const auto unbiased = unbiasedness_table(*model, config.n_list, config.reps, config.seed, options);
  // convergence_table needs strictly increasing n; sort a copy for it
  std::vector<std::size_t> sorted_n = config.n_list;
  std::sort(sorted_n.begin(), sorted_n.end());
  sorted_n.erase(std::unique(sorted_n.begin(), sorted_n.end()), sorted_n.end());
  const auto convergence =
      convergence_table(*model, sorted_n, config.reps, epsilons, config.seed, options);

  std::vector<AssertionResult> checks = check_unbiasedness(unbiased);
  const auto conv_checks = check_convergence(convergence, config.reps);
  checks.insert(checks.end(), conv_checks.begin(), conv_checks.end());
  const bool all_passed =
      std::all_of(checks.begin(), checks.end(), [](const AssertionResult& a) { return a.passed; });

  const Json config_doc = config_json(config);
  const double tau = *options.reference_tau;
  std::ostringstream doc;
  switch (config.format) {
    case OutputFormat::Json: {
      Json j;
      j["config"] = config_doc;
      j["model"] = model->describe();
      j["reference_tau"] = tau;
      j["unbiasedness"] = Json::array();
      for (const auto& r : unbiased) {
        j["unbiasedness"].push_back({{"n", r.n},
                                     {"tau_mean", r.tau_mean},
                                     {"std_error", r.std_error},
                                     {"reference", r.reference},
                                     {"z_score", r.z_score},
                                     {"status", r.within_tolerance ? "PASS" : "FAIL"}});
      }
      j["convergence"] = Json::array();
      for (const auto& r : convergence) {
        j["convergence"].push_back({{"n", r.n},
                                    {"epsilon", r.epsilon},
                                    {"exceed_count", r.exceed_count},
                                    {"exceed_frequency", r.exceed_frequency},
                                    {"tau_variance", r.tau_variance}});
      }
      j["checks"] = Json::array();
      for (const auto& c : checks) {
        j["checks"].push_back(
            {{"check", c.name}, {"status", c.passed ? "PASS" : "FAIL"}, {"detail", c.detail}});
      }
      j["passed"] = all_passed;
      doc << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::Csv: {
      doc << config_line(config_doc) << '\n';
      doc << "section,n,epsilon,tau_mean,std_error,reference,z_score,exceed_count,"
             "exceed_frequency,tau_variance,check,status\n";
      for (const auto& r : unbiased) {
        doc << fmt::format("unbiasedness,{},,{},{},{},{},,,,,{}\n", r.n,
                           r.tau_mean, r.std_error, r.reference, r.z_score,
                           r.within_tolerance ? "PASS" : "FAIL");
      }
      for (const auto& r : convergence) {
        doc << fmt::format("convergence,{},{},,,{},,{},{},{},,\n", r.n,
                           r.epsilon, tau, r.exceed_count, r.exceed_frequency, r.tau_variance);
      }
      for (const auto& c : checks) {
        doc << fmt::format("check,,,,,,,,,,{},{}\n", csv_field(c.name), c.passed ? "PASS" : "FAIL");
      }
      break;
    }
    case OutputFormat::Table: {
      doc << config_line(config_doc) << '\n';
      doc << fmt::format("{}  reference tau = {:.6f}\n\n", model->describe(), tau);
      doc << "unbiasedness (E tau_n = tau for every n)\n";
      doc << fmt::format("{:>8}  {:>10}  {:>10}  {:>8}  {}\n", "n", "tau_mean", "std_error", "z",
                         "status");
      for (const auto& r : unbiased) {
        doc << fmt::format("{:>8}  {:>10.6f}  {:>10.6f}  {:>+8.2f}  {}\n", r.n, r.tau_mean,
                           r.std_error, r.z_score, r.within_tolerance ? "PASS" : "FAIL");
      }
      doc << "\nconvergence (P(|tau_n - tau| > eps) and Var tau_n)\n";
      doc << fmt::format("{:>8}  {:>8}  {:>10}  {:>12}\n", "n", "eps", "P_exceed", "variance");
      for (const auto& r : convergence) {
        doc << fmt::format("{:>8}  {:>8.4f}  {:>10.4f}  {:>12.4e}\n", r.n, r.epsilon,
                           r.exceed_frequency, r.tau_variance);
      }
      doc << "\nchecks\n";
      for (const auto& c : checks) {
        doc << fmt::format("  [{}] {}: {}\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
      }
      doc << fmt::format("\noverall: {}\n", all_passed ? "PASS" : "FAIL");
      break;
    }
  }

  if (config.output_path) {
    write_file(*config.output_path, doc.str());
  } else {
    out << doc.str();
  }

  if (config.plot_path) {
    std::vector<SpreadPoint> points;
    for (const std::size_t n : sorted_n) {
      const auto u = std::find_if(unbiased.begin(), unbiased.end(),
                                  [&](const UnbiasednessRow& r) { return r.n == n; });
      const auto c = std::find_if(convergence.begin(), convergence.end(),
                                  [&](const ConvergenceRow& r) { return r.n == n; });
      points.push_back({n, u->tau_mean, std::sqrt(c->tau_variance)});
    }
    write_file(*config.plot_path,
               render_spread_svg(points, tau,
                                 fmt::format("tau_n spread vs n, {} (R={})", model->describe(),
                                             config.reps)));
  }
  return all_passed ? kExitOk : kExitAssertionFailed;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const std::optional<RunConfig> config = parse_command_line(argc, argv, out);
    if (!config) return kExitOk;
    switch (config->command) {
      case Command::Tau:
        return cmd_tau(*config, out);
      case Command::Theoretical:
        return cmd_theoretical(*config, out);
      case Command::Simulate:
        return cmd_simulate(*config, out);
      case Command::Report:
        return cmd_report(*config, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace kendall::cli
