#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "amuse/csv.hpp"
#include "amuse/dataset.hpp"
#include "amuse/embedding_io.hpp"
#include "amuse/errors.hpp"
#include "amuse/evaluation.hpp"
#include "amuse/experiments.hpp"
#include "amuse/secants.hpp"
#include "amuse/solver.hpp"

namespace amuse::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using csv::format_report;

// Numbers in printed reports carry 12 significant digits, like the CSVs.
double rounded(double value) { return std::stod(format_report(value)); }

TraceMode parse_trace(const std::string& text) {
  if (text == "auto") return TraceMode::automatic();
  double budget = 0.0;
  if (!csv::parse_double(text, budget) || !std::isfinite(budget) || budget <= 0.0)
    throw UsageError("--trace must be 'auto' or a positive number, got '" + text + "'");
  return TraceMode::fixed(budget);
}

SecantOptions secant_options(const SecantFlags& flags) {
  SecantOptions options;
  options.seed = flags.seed;
  options.min_distance = flags.min_distance;
  if (flags.min_distance < 0.0) throw UsageError("--min-dist must be nonnegative");
  if (flags.count == "all") return options;
  long long count = 0;
  const char* first = flags.count.data();
  const char* last = first + flags.count.size();
  const auto [end, ec] = std::from_chars(first, last, count);
  if (ec != std::errc{} || end != last || count < 1)
    throw UsageError("--secants must be a positive integer or 'all', got '" + flags.count + "'");
  options.max_count = static_cast<Eigen::Index>(count);
  return options;
}

GameConfig game_config(const GameFlags& flags, long rank, const TraceMode& trace) {
  if (rank < 1) throw UsageError("--rank must be at least 1");
  if (!(flags.eig_tol > 0.0)) throw UsageError("--eig-tol must be positive");
  if (flags.radius && !(*flags.radius > 0.0)) throw UsageError("--radius must be positive");
  if (flags.eta && !(*flags.eta >= 0.0)) throw UsageError("--eta must be nonnegative");
  GameConfig config;
  config.rank = rank;
  config.trace = trace;
  config.eig.tol = flags.eig_tol;
  config.radius = flags.radius;
  config.eta_override = flags.eta;
  return config;
}

RecoveryConfig recovery_config(const SweepFlags& flags) {
  RecoveryConfig config;
  try {
    config.snr_grid = parse_grid(flags.snr);
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("--snr: ") + e.what());
  }
  if (flags.subset < 1) throw UsageError("--subset must be at least 1");
  if (!(flags.lambda_factor >= 0.0)) throw UsageError("--lambda-factor must be nonnegative");
  if (flags.max_iter < 1) throw UsageError("--max-iter must be at least 1");
  if (!(flags.tol >= 0.0)) throw UsageError("--tol must be nonnegative");
  if (flags.noise == "signal") {
    config.noise_side = NoiseSide::Signal;
  } else if (flags.noise == "measurement") {
    config.noise_side = NoiseSide::Measurement;
  } else {
    throw UsageError("--noise must be 'signal' or 'measurement'");
  }
  config.subset_size = flags.subset;
  config.seed = flags.seed;
  config.lambda_factor = flags.lambda_factor;
  config.max_iter = flags.max_iter;
  config.tol = flags.tol;
  return config;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing", path.string());
  out << text;
  if (!out.flush()) throw IoError("write failed", path.string());
}

void append_row(const fs::path& path, const std::string& header, const std::string& row) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot open for appending", path.string());
  if (fresh) out << header << '\n';
  out << row << '\n';
  if (!out.flush()) throw IoError("write failed", path.string());
}

void emit(const json& report, const std::string& path) {
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!path.empty()) write_text(path, text);
}

json ric_json(const RicReport& ric) {
  return {{"delta_hat", rounded(ric.delta_hat)},
          {"residual_max", rounded(ric.residual_max)},
          {"residual_min", rounded(ric.residual_min)},
          {"residual_mean", rounded(ric.residual_mean)},
          {"rank_used", ric.rank_used},
          {"trace", rounded(ric.trace)}};
}

void warn_unconverged(const RecoveryReport& report) {
  for (const auto& row : report.rows) {
    if (row.unconverged > 0) {
      std::cerr << "warning: " << row.unconverged << " decode(s) for '" << row.label << "' at "
                << format_report(row.snr_db) << " dB hit the iteration cap\n";
    }
  }
}

}  // namespace

int run_gen_data(const GenDataArgs& args) {
  if (args.side < 1 || args.square < 1) throw UsageError("--side and --square must be positive");
  if (args.square > args.side) throw UsageError("--square cannot exceed --side");
  if (args.square == args.side) throw UsageError("--square must be smaller than --side");
  const DataSet data = generate_translated_squares(args.side, args.square);
  save_dataset(data, args.out);
  std::cout << "wrote " << data.size() << " points of dimension " << data.dim() << " to "
            << args.out << '\n';
  return 0;
}

int run_learn(const LearnArgs& args) {
  const TraceMode trace = parse_trace(args.trace);
  const SecantOptions options = secant_options(args.secants);
  GameConfig config = game_config(args.game, args.rank, trace);
  if (!(args.error_inf >= 0.0)) throw UsageError("--error-inf must be nonnegative");
  config.error_inf = args.error_inf;

  const DataSet data = load_dataset(args.data);
  const SecantSet secants = build_secants(data, options);
  SolveResult result = solve(secants, config);
  result.embedding.set_label("amuse");
  const RicReport ric = empirical_ric(secants, result.embedding);

  save_embedding(result.embedding, args.out);
  const fs::path trace_path = args.iterations.empty()
                                  ? fs::path(args.out).replace_extension(".iterations.csv")
                                  : fs::path(args.iterations);
  write_text(trace_path, iteration_trace_csv(result.iterations));

  json radii = json::array();
  for (const auto& trial : result.radius_search)
    radii.push_back({{"radius", rounded(trial.radius)}, {"delta_hat", rounded(trial.delta_hat)}});
  json report = ric_json(ric);
  report["rank"] = config.rank;
  report["secants"] = secants.size();
  report["eta"] = rounded(result.bounds.eta);
  report["loss_max"] = rounded(result.bounds.loss_max);
  report["gap"] = rounded(result.bounds.gap);
  report["theorem_rhs"] = rounded(result.bounds.theorem_rhs);
  report["radius"] = rounded(result.radius);
  report["radius_search"] = std::move(radii);
  report["embedding"] = args.out;
  report["iterations"] = trace_path.string();
  emit(report, args.report);
  return 0;
}

int run_eval_ric(const EvalRicArgs& args) {
  const SecantOptions options = secant_options(args.secants);
  const DataSet data = load_dataset(args.data);
  const LearnedEmbedding embedding = load_embedding(args.embedding);
  if (embedding.dim() != data.dim())
    throw DimensionMismatch("embedding dimension " + std::to_string(embedding.dim()) +
                            " does not match data dimension " + std::to_string(data.dim()));
  const SecantSet secants = build_secants(data, options);
  const RicReport ric = empirical_ric(secants, embedding);

  json report = {{"label", embedding.label()}, {"rank", embedding.rank_budget()},
                 {"secants", secants.size()}};
  report.update(ric_json(ric));
  emit(report, args.json);
  if (!args.table.empty()) {
    append_row(args.table, "label,rank,rank_used,trace,delta_hat",
               embedding.label() + ',' + std::to_string(embedding.rank_budget()) + ',' +
                   std::to_string(ric.rank_used) + ',' + format_report(ric.trace) + ',' +
                   format_report(ric.delta_hat));
  }
  return 0;
}

int run_baseline(const BaselineArgs& args) {
  if (args.kind != "pca" && args.kind != "gaussian")
    throw UsageError("--kind must be 'pca' or 'gaussian'");
  if (args.rank < 1) throw UsageError("--rank must be at least 1");
  const TraceMode trace = parse_trace(args.trace);
  const SecantOptions options = secant_options(args.secants);

  const DataSet data = load_dataset(args.data);
  const SecantSet secants = build_secants(data, options);
  LearnedEmbedding embedding;
  json report = {{"kind", args.kind}, {"rank", args.rank}};
  if (args.kind == "pca") {
    const PcaBaseline pca = pca_baseline(data, args.rank, trace, secants);
    embedding = pca.embedding;
    report["components"] = pca.components;
    report["rank_deficient"] = pca.rank_deficient;
  } else {
    embedding = gaussian_baseline(data.dim(), args.rank, trace, args.gaussian_seed, secants);
  }
  embedding.set_label(args.kind);
  save_embedding(embedding, args.out);
  report.update(ric_json(empirical_ric(secants, embedding)));
  report["embedding"] = args.out;
  emit(report, {});
  return 0;
}

int run_gen_check(const GenCheckArgs& args) {
  if (!(args.epsilon >= 0.0 && args.epsilon < 1.0)) throw UsageError("--epsilon must lie in [0, 1)");
  if (args.trials < 1) throw UsageError("--trials must be at least 1");
  const SecantOptions options = secant_options(args.secants);

  const DataSet data = load_dataset(args.data);
  const LearnedEmbedding embedding = load_embedding(args.embedding);
  const SecantSet secants = build_secants(data, options);
  const GeneralizationReport check = empirical_generalization(data, embedding, secants,
                                                              args.epsilon, args.trials,
                                                              args.trial_seed);
  const json report = {{"delta_hat", rounded(check.delta_hat)},
                       {"epsilon", rounded(check.epsilon)},
                       {"trials", check.trials},
                       {"bound", rounded(check.bound)},
                       {"upper_sq_bound", rounded(check.upper_sq_bound)},
                       {"lower_sq_bound", rounded(check.lower_sq_bound)},
                       {"max_linear_distortion", rounded(check.max_linear_distortion)},
                       {"max_sq_distortion", rounded(check.max_sq_distortion)},
                       {"max_sq_excess", rounded(check.max_sq_excess)},
                       {"max_sq_deficit", rounded(check.max_sq_deficit)},
                       {"passed", check.passed}};
  emit(report, args.json);
  if (!check.passed) {
    std::cerr << "error: observed distortion exceeds the generalization bound\n";
    return 1;
  }
  return 0;
}

int run_fig1(const Fig1Args& args) {
  Fig1Config config;
  config.trace = parse_trace(args.trace);
  config.secants = secant_options(args.secants);
  config.game = game_config(args.game, 1, TraceMode::automatic());
  config.gaussian_seed = args.gaussian_seed;
  if (args.mode == "fresh") {
    config.mode = SweepMode::Fresh;
  } else if (args.mode == "prefix") {
    config.mode = SweepMode::Prefix;
  } else {
    throw UsageError("--mode must be 'fresh' or 'prefix'");
  }
  config.ranks.clear();
  try {
    for (const double rank : parse_grid(args.ranks)) {
      if (rank < 1.0 || rank != std::floor(rank)) throw UsageError("--ranks must be positive integers");
      config.ranks.push_back(static_cast<Eigen::Index>(rank));
    }
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("--ranks: ") + e.what());
  }

  const DataSet data = load_dataset(args.data);
  const std::string table = fig1_csv(run_fig1(data, config));
  write_text(args.out, table);
  std::cout << table;
  return 0;
}

int run_fig2(const Fig2Args& args) {
  Fig2Config config;
  config.rank = args.rank;
  config.secants = secant_options(args.secants);
  config.game = game_config(args.game, args.rank, TraceMode::automatic());
  config.recovery = recovery_config(args.sweep);
  config.gaussian_seed = args.gaussian_seed;

  const DataSet data = load_dataset(args.data);
  const Fig2Result result = amuse::run_fig2(data, config);
  warn_unconverged(result.report);
  const std::string table = fig2_csv(result.rows);
  write_text(args.out, table);
  if (!args.report.empty()) write_text(args.report, recovery_report_csv(result.report));
  std::cout << table;
  return 0;
}

int run_cs_sweep(const CsSweepArgs& args) {
  const RecoveryConfig config = recovery_config(args.sweep);
  if (args.embeddings.empty()) throw UsageError("--embeddings needs at least one file");

  const DataSet data = load_dataset(args.data);
  std::vector<LabeledMatrix> matrices;
  for (const auto& path : args.embeddings) {
    const LearnedEmbedding embedding = load_embedding(path);
    matrices.push_back({fs::path(path).stem().string(), embedding.phi()});
  }
  const RecoveryReport report = mse_sweep(data, matrices, config);
  warn_unconverged(report);
  const std::string table = recovery_report_csv(report);
  write_text(args.out, table);
  std::cout << table;
  return 0;
}

}  // namespace amuse::cli
