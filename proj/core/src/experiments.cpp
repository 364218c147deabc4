#include "amuse/experiments.hpp"

#include <cmath>
#include <sstream>

#include "amuse/csv.hpp"
#include "amuse/errors.hpp"

namespace amuse {

using csv::format_report;

std::vector<Fig1Row> run_fig1(const DataSet& data, const Fig1Config& config) {
  if (config.ranks.empty()) throw InvalidArgument("rank grid is empty");
  const SecantSet secants = build_secants(data, config.secants);

  LearnedEmbedding longest;
  if (config.mode == SweepMode::Prefix) {
    GameConfig game = config.game;
    game.rank = *std::max_element(config.ranks.begin(), config.ranks.end());
    game.trace = TraceMode::automatic();
    longest = solve(secants, game).embedding;
  }

  std::vector<Fig1Row> rows;
  for (const Eigen::Index rank : config.ranks) {
    if (rank < 1) throw InvalidArgument("ranks must be positive");
    LearnedEmbedding learned;
    if (config.mode == SweepMode::Prefix) {
      learned = prefix_embedding(longest, rank, secants);
    } else {
      GameConfig game = config.game;
      game.rank = rank;
      game.trace = TraceMode::automatic();
      learned = solve(secants, game).embedding;
    }
    if (!config.trace.is_auto()) learned = rescale(learned, secants, config.trace);

    const TraceMode matched = TraceMode::fixed(learned.trace());
    const auto pca = pca_baseline(data, std::min(rank, data.dim()), matched, secants);
    const auto gaussian = gaussian_baseline(data.dim(), rank, matched, config.gaussian_seed, secants);

    Fig1Row row;
    row.rank = rank;
    row.delta_amuse = empirical_ric(secants, learned).delta_hat;
    row.delta_pca = empirical_ric(secants, pca.embedding).delta_hat;
    row.delta_gaussian = empirical_ric(secants, gaussian).delta_hat;
    row.trace = learned.trace();
    rows.push_back(row);
  }
  return rows;
}

std::string fig1_csv(const std::vector<Fig1Row>& rows) {
  std::ostringstream out;
  out << "rank,delta_amuse,delta_pca,delta_gaussian\n";
  for (const auto& row : rows) {
    out << row.rank << ',' << format_report(row.delta_amuse) << ','
        << format_report(row.delta_pca) << ',' << format_report(row.delta_gaussian) << '\n';
  }
  return out.str();
}

Fig2Result run_fig2(const DataSet& data, const Fig2Config& config) {
  const SecantSet secants = build_secants(data, config.secants);
  GameConfig game = config.game;
  game.rank = config.rank;
  game.trace = TraceMode::automatic();
  const LearnedEmbedding learned = solve(secants, game).embedding;
  const LearnedEmbedding random = gaussian_baseline(
      data.dim(), config.rank, TraceMode::fixed(learned.trace()), config.gaussian_seed, secants);

  Fig2Result result;
  result.trace = learned.trace();
  result.report = mse_sweep(data, {{"adaptive", learned.phi()}, {"random", random.phi()}},
                            config.recovery);
  for (std::size_t k = 0; k + 1 < result.report.rows.size(); k += 2) {
    result.rows.push_back({result.report.rows[k].snr_db, result.report.rows[k].mean_mse,
                           result.report.rows[k + 1].mean_mse});
  }
  return result;
}

std::string fig2_csv(const std::vector<Fig2Row>& rows) {
  std::ostringstream out;
  out << "snr_db,mse_adaptive,mse_random\n";
  for (const auto& row : rows) {
    out << format_report(row.snr_db) << ',' << format_report(row.mse_adaptive) << ','
        << format_report(row.mse_random) << '\n';
  }
  return out.str();
}

std::string recovery_report_csv(const RecoveryReport& report) {
  std::ostringstream out;
  out << "snr_db,label,mean_mse\n";
  for (const auto& row : report.rows) {
    out << format_report(row.snr_db) << ',' << row.label << ',' << format_report(row.mean_mse)
        << '\n';
  }
  return out.str();
}

std::string iteration_trace_csv(const std::vector<IterationRecord>& records) {
  std::ostringstream out;
  out << "step,zero_step,lambda_min,eig_iterations,delta_running,weight_sum_error,weight_min\n";
  for (const auto& r : records) {
    out << r.step << ',' << (r.zero_step ? 1 : 0) << ',' << format_report(r.lambda_min) << ','
        << r.eig_iterations << ',' << format_report(r.delta_running) << ','
        << format_report(r.weight_sum_error) << ',' << format_report(r.weight_min) << '\n';
  }
  return out.str();
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  auto fields = csv::split(text);
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::string_view rest = text;
    while (true) {
      const auto colon = rest.find(':');
      double v = 0.0;
      if (!csv::parse_double(rest.substr(0, colon), v)) {
        throw InvalidArgument("bad grid '" + text + "'");
      }
      parts.push_back(v);
      if (colon == std::string_view::npos) break;
      rest.remove_prefix(colon + 1);
    }
    if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0]) {
      throw InvalidArgument("grid must be start:step:stop with step > 0 and stop >= start");
    }
    const auto count = static_cast<long>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(parts[0] + static_cast<double>(k) * parts[1]);
    return out;
  }
  for (auto f : fields) {
    double v = 0.0;
    if (!csv::parse_double(f, v)) throw InvalidArgument("bad grid value '" + std::string(f) + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("empty grid");
  return out;
}

}  // namespace amuse
