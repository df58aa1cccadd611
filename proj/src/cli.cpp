#include "icatopsis/cli.hpp"

#include "icatopsis/ambiguity.hpp"
#include "icatopsis/csv_io.hpp"
#include "icatopsis/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace icatopsis::cli {

namespace {

using nlohmann::json;

std::vector<std::string> latent_labels(Eigen::Index n) {
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < n; ++i) labels.push_back("L" + std::to_string(i + 1));
  return labels;
}

std::string join_indices(const std::vector<std::size_t>& values) {
  std::string out;
  for (std::size_t v : values) out += (out.empty() ? "" : " ") + std::to_string(v + 1);
  return out;
}

std::string join_signs(const std::vector<int>& values) {
  std::string out;
  for (int v : values) out += (out.empty() ? "" : " ") + std::string(v > 0 ? "+1" : "-1");
  return out;
}

void warn(std::ostream& log, LogLevel level, const std::string& message) {
  if (level != LogLevel::Quiet) log << "warning: " << message << '\n';
}

void info(std::ostream& log, LogLevel level, const std::string& message) {
  if (level == LogLevel::Info) log << message << '\n';
}

std::string matrix_csv(const LabeledMatrix& m, bool flagged) {
  std::ostringstream out;
  if (flagged) out << kNotConvergedFlag << '\n';
  write_labeled_matrix(out, m);
  return out.str();
}

template <typename Fn>
int guarded(std::ostream& log, Fn&& body) {
  try {
    return body();
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
  } catch (const json::exception& e) {
    log << "error: config: " << e.what() << '\n';
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace

LogLevel log_level_from_env() {
  const char* value = std::getenv("ICATOPSIS_LOG");
  if (value == nullptr) return LogLevel::Warn;
  const std::string v(value);
  if (v == "quiet") return LogLevel::Quiet;
  if (v == "info" || v == "debug") return LogLevel::Info;
  return LogLevel::Warn;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> values;
  for (const std::string& field : split_csv_line(text, 1)) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size()) throw InvalidInput("'" + field + "' is not a number");
    values.push_back(v);
  }
  return values;
}

int cmd_rank(const RankOptions& options, std::ostream& log, LogLevel level) {
  return guarded(log, [&] {
    const DecisionMatrix decision = read_decision_matrix(options.input);
    const WeightVector weights =
        options.weights.empty() ? WeightVector::uniform(decision.criteria()) : parse_weights(options.weights);
    if (weights.size() != decision.criteria()) {
      throw DimensionMismatch("got " + std::to_string(weights.size()) + " weights for " +
                              std::to_string(decision.criteria()) + " criteria");
    }
    const MethodRanking ranked = rank_with(options.method, decision, weights, options.ica);
    for (std::size_t i : ranked.ranking.degenerate)
      warn(log, level, "DegenerateAlternatives: '" + decision.alternative_labels()[i] + "' scored 0.5");

    const std::vector<std::size_t> positions = ranked.ranking.positions();
    std::ostringstream out;
    if (!ranked.converged) out << kNotConvergedFlag << '\n';
    out << "alternative_label,score,rank\n";
    for (std::size_t i = 0; i < decision.alternatives(); ++i) {
      out << quote_csv_field(decision.alternative_labels()[i]) << ','
          << format_number(ranked.ranking.scores(static_cast<Eigen::Index>(i))) << ',' << positions[i] << '\n';
    }
    write_file_atomically(options.output, out.str());
    info(log, level, "ranked " + std::to_string(decision.alternatives()) + " alternatives with " +
                         std::string(method_name(options.method)));
    if (!ranked.converged) {
      log << "error: NotConverged: ICA did not converge; best iterate written to " << options.output.string() << '\n';
      return kExitNotConverged;
    }
    return kExitOk;
  });
}

int cmd_separate(const SeparateOptions& options, std::ostream& log, LogLevel level) {
  return guarded(log, [&] {
    const DecisionMatrix observed = read_decision_matrix(options.input);
    const MixedData data(observed.values().transpose());

    SeparationResult separation;
    std::string algorithm;
    if (options.estimated_mixing) {
      const LabeledMatrix given = read_labeled_matrix(*options.estimated_mixing);
      if (given.values.rows() != given.values.cols()) throw DimensionMismatch("estimated mixing matrix must be square");
      if (given.values.rows() != data.channels()) {
        throw DimensionMismatch("estimated mixing matrix size does not match the number of criteria");
      }
      separation.estimated_mixing = given.values;
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(given.values);
      if (!(lu.rcond() > 1e-14)) throw SingularMatrix("estimated mixing matrix is singular");
      separation.separating = lu.inverse();
      separation.mean = data.samples().rowwise().mean();
      separation.sources = separation.separating * (data.samples().colwise() - separation.mean);
      separation.converged = true;
      algorithm = "provided";
    } else {
      try {
        separation = separate(data, options.algorithm, options.ica);
      } catch (const NotConverged& e) {
        separation = e.best();
      }
      algorithm = std::string(to_string(options.algorithm));
    }

    const AdjustedSeparation adjusted = resolve(separation);
    for (std::size_t row : adjusted.tied_rows)
      warn(log, level, "tie in row " + std::to_string(row + 1) + " of the mixing matrix; lowest column kept");

    const Eigen::Index n = adjusted.mixing_adjusted.cols();
    const bool flagged = !separation.converged;
    const std::vector<std::string> latents = latent_labels(n);
    const Eigen::MatrixXd separating_adjusted = estimated_mixing(adjusted.mixing_adjusted);

    std::ostringstream diagnostics;
    if (flagged) diagnostics << kNotConvergedFlag << '\n';
    diagnostics << "key,value\n"
                << "algorithm," << algorithm << '\n'
                << "converged," << (separation.converged ? "true" : "false") << '\n'
                << "iterations," << separation.iterations << '\n'
                << "seed," << options.ica.seed << '\n'
                << "permutation," << join_indices(adjusted.permutation_applied) << '\n'
                << "signs," << join_signs(adjusted.signs_applied) << '\n'
                << "tied_rows," << join_indices(adjusted.tied_rows) << '\n';

    const std::string prefix = options.output_prefix;
    write_file_atomically(prefix + "_mixing.csv",
                          matrix_csv({"criterion", observed.criterion_labels(), latents, adjusted.mixing_adjusted}, flagged));
    write_file_atomically(prefix + "_separating.csv",
                          matrix_csv({"latent", latents, observed.criterion_labels(), separating_adjusted}, flagged));
    write_file_atomically(prefix + "_sources.csv",
                          matrix_csv({"alternative", observed.alternative_labels(), latents,
                                      adjusted.sources_adjusted.transpose()},
                                     flagged));
    write_file_atomically(prefix + "_diagnostics.csv", diagnostics.str());
    info(log, level, "separated " + std::to_string(n) + " latent variables with " + algorithm);
    if (flagged) {
      log << "error: NotConverged: " << algorithm << " stopped after " << separation.iterations
          << " iterations; best iterate written\n";
      return kExitNotConverged;
    }
    return kExitOk;
  });
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config '" + path.string() + "'");
  const json j = json::parse(in);
  ExperimentConfig c;
  if (j.contains("alternatives")) c.alternatives = j.at("alternatives").get<std::size_t>();
  if (j.contains("realizations")) c.realizations = j.at("realizations").get<std::size_t>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
  if (j.contains("snr_grid_db")) c.snr_grid_db = j.at("snr_grid_db").get<std::vector<double>>();
  if (j.contains("mixing")) {
    const auto rows = j.at("mixing").get<std::vector<std::vector<double>>>();
    Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != static_cast<std::size_t>(a.cols())) throw InvalidInput("config: ragged mixing matrix");
      for (std::size_t k = 0; k < rows[i].size(); ++k) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
    c.mixing = MixingSpec(a, "config");
    if (!j.contains("weights")) c.weights = WeightVector::uniform(static_cast<std::size_t>(a.rows()));
  }
  if (j.contains("weights")) c.weights = WeightVector(j.at("weights").get<std::vector<double>>());
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& name : j.at("methods").get<std::vector<std::string>>()) c.methods.push_back(parse_method(name));
  }
  if (j.contains("ica")) {
    const json& ica = j.at("ica");
    if (ica.contains("max_iter")) c.ica.max_iter = ica.at("max_iter").get<int>();
    if (ica.contains("tolerance")) c.ica.tolerance = ica.at("tolerance").get<double>();
    if (ica.contains("restarts")) c.ica.restarts = ica.at("restarts").get<int>();
    if (ica.contains("learning_rate")) c.ica.learning_rate = ica.at("learning_rate").get<double>();
  }
  return c;
}

ExperimentConfig resolve_experiment_config(const ExperimentOptions& options) {
  ExperimentConfig c = options.config ? load_experiment_config(*options.config) : ExperimentConfig{};
  if (options.seed) c.seed = *options.seed;
  if (options.realizations) c.realizations = *options.realizations;
  if (options.snr_grid) c.snr_grid_db = *options.snr_grid;
  if (options.threads) c.threads = *options.threads;
  c.validate();
  return c;
}

std::string format_experiment_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "method,snr_db,mean_tau,std_tau,realizations,failures\n";
  for (const CellSummary& cell : result.cells) {
    out << method_name(cell.method) << ',' << format_number(cell.snr_db) << ',' << format_number(cell.mean_tau) << ','
        << format_number(cell.std_tau) << ',' << cell.realizations << ',' << cell.failures << '\n';
  }
  return out.str();
}

int cmd_experiment(const ExperimentOptions& options, std::ostream& log, LogLevel level) {
  return guarded(log, [&] {
    const ExperimentConfig config = resolve_experiment_config(options);
    info(log, level, "running " + std::to_string(config.realizations) + " realizations x " +
                         std::to_string(config.snr_grid_db.size()) + " SNR points");
    const ExperimentResult result = run_experiment(config);
    write_file_atomically(options.output, format_experiment_csv(result));
    return kExitOk;
  });
}

int run(int argc, char** argv) {
  CLI::App app{"ICA-TOPSIS multicriteria ranking"};
  app.require_subcommand(1);

  RankOptions rank;
  std::string rank_method = "topsis-e";
  std::string rank_input, rank_output;
  auto* rank_cmd = app.add_subcommand("rank", "Rank the alternatives of a decision-matrix CSV");
  rank_cmd->add_option("--input", rank_input, "Decision matrix CSV")->required();
  rank_cmd->add_option("--weights", rank.weights, "Weights file or inline list (default: uniform)");
  rank_cmd->add_option("--method", rank_method, "topsis-e | topsis-m | ica-topsis-fastica | ica-topsis-infomax");
  rank_cmd->add_option("--seed", rank.ica.seed, "Seed for ICA initialization");
  rank_cmd->add_option("--output", rank_output, "Output CSV")->required();

  SeparateOptions sep;
  std::string sep_algorithm = "fastica";
  std::string sep_input, sep_mixing;
  int sep_max_iter = 0;
  double sep_tolerance = 0.0;
  auto* sep_cmd = app.add_subcommand("separate", "Estimate and disambiguate latent variables");
  sep_cmd->add_option("--input", sep_input, "Observation CSV (alternatives x criteria)")->required();
  sep_cmd->add_option("--algorithm", sep_algorithm, "fastica | infomax | infomax-logistic");
  sep_cmd->add_option("--seed", sep.ica.seed, "Seed for ICA initialization");
  sep_cmd->add_option("--max-iter", sep_max_iter, "Iteration cap per attempt")->check(CLI::PositiveNumber);
  sep_cmd->add_option("--tolerance", sep_tolerance, "Stopping threshold")->check(CLI::PositiveNumber);
  sep_cmd->add_option("--restarts", sep.ica.restarts, "Extra random restarts")->check(CLI::NonNegativeNumber);
  sep_cmd->add_option("--estimated-mixing", sep_mixing, "Use this mixing estimate instead of running ICA");
  sep_cmd->add_option("--output-prefix", sep.output_prefix, "Prefix of the output files")->required();

  ExperimentOptions exp;
  std::string exp_config, exp_grid, exp_output;
  std::uint64_t exp_seed = 0;
  std::size_t exp_realizations = 0;
  unsigned exp_threads = 0;
  auto* exp_cmd = app.add_subcommand("experiment", "Monte-Carlo SNR sweep of the four ranking methods");
  exp_cmd->add_option("--config", exp_config, "JSON experiment config");
  auto* seed_opt = exp_cmd->add_option("--seed", exp_seed, "Base seed");
  auto* real_opt = exp_cmd->add_option("--realizations", exp_realizations, "Realizations per SNR")->check(CLI::PositiveNumber);
  exp_cmd->add_option("--snr-grid", exp_grid, "Comma-separated SNR values in dB");
  auto* threads_opt = exp_cmd->add_option("--threads", exp_threads, "Worker threads (0 = all cores)");
  exp_cmd->add_option("--output", exp_output, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  const LogLevel level = log_level_from_env();
  if (rank_cmd->parsed()) {
    try {
      rank.method = parse_method(rank_method);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitError;
    }
    rank.input = rank_input;
    rank.output = rank_output;
    return cmd_rank(rank, std::cerr, level);
  }
  if (sep_cmd->parsed()) {
    try {
      sep.algorithm = parse_algorithm(sep_algorithm);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitError;
    }
    sep.input = sep_input;
    if (!sep_mixing.empty()) sep.estimated_mixing = sep_mixing;
    if (sep_max_iter > 0) sep.ica.max_iter = sep_max_iter;
    if (sep_tolerance > 0.0) sep.ica.tolerance = sep_tolerance;
    return cmd_separate(sep, std::cerr, level);
  }
  if (!exp_config.empty()) exp.config = exp_config;
  if (seed_opt->count() > 0) exp.seed = exp_seed;
  if (real_opt->count() > 0) exp.realizations = exp_realizations;
  if (threads_opt->count() > 0) exp.threads = exp_threads;
  if (!exp_grid.empty()) {
    try {
      exp.snr_grid = parse_number_list(exp_grid);
    } catch (const Error& e) {
      std::cerr << "error: --snr-grid: " << e.what() << '\n';
      return kExitError;
    }
  }
  exp.output = exp_output;
  return cmd_experiment(exp, std::cerr, level);
}

}  // namespace icatopsis::cli
