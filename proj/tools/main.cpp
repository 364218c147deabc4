#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "amuse/errors.hpp"
#include "commands.hpp"

namespace {

using amuse::cli::GameFlags;
using amuse::cli::SecantFlags;
using amuse::cli::SweepFlags;

constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

// Reads a flat JSON object whose keys are long option names of the selected
// subcommand, without the leading dashes. CLI11 applies these only to options
// absent from the command line, so flags override the file and the file
// overrides defaults. Unknown keys are rejected by the root app.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* root) : root_(root) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return {};
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(input);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError("config", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ConversionError("config", "top level must be an object");

    std::vector<CLI::ConfigItem> items;
    const auto selected = root_->get_subcommands();
    for (const auto& [key, value] : doc.items()) {
      CLI::ConfigItem item;
      if (!selected.empty()) item.parents.push_back(selected.front()->get_name());
      item.name = key;
      item.inputs.push_back(scalar_text(key, value));
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  const CLI::App* root_;

  static std::string scalar_text(const std::string& key, const nlohmann::json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
    if (value.is_number()) return value.dump();
    if (value.is_array()) {
      // ["a.json", "b.json"] and [10, 30, 60] map onto comma-list flags
      std::string joined;
      for (const auto& element : value) {
        if (element.is_array() || element.is_object())
          throw CLI::ConversionError(key, "nested values are not supported");
        if (!joined.empty()) joined += ',';
        joined += element.is_string() ? element.get<std::string>() : element.dump();
      }
      return joined;
    }
    throw CLI::ConversionError(key, "unsupported value type");
  }
};

CLI::App* command(CLI::App& app, const std::string& name, const std::string& about) {
  CLI::App* sub = app.add_subcommand(name, about);
  sub->fallthrough();  // lets --config follow the subcommand name
  return sub;
}

void add_data(CLI::App* sub, std::string& path) {
  sub->add_option("--data", path, "Dataset CSV, one sample per row")->required();
}

void add_secants(CLI::App* sub, SecantFlags& flags) {
  sub->add_option("--secants", flags.count, "Secant count to subsample, or 'all'")
      ->capture_default_str();
  sub->add_option("--seed", flags.seed, "Secant subsampling seed")->capture_default_str();
  sub->add_option("--min-dist", flags.min_distance, "Drop pairs closer than this")
      ->capture_default_str();
}

void add_game(CLI::App* sub, GameFlags& flags) {
  sub->add_option("--eig-tol", flags.eig_tol, "Eigensolver relative residual tolerance")
      ->capture_default_str();
  sub->add_option("--radius", flags.radius, "Fix the primal trace radius instead of searching");
  sub->add_option("--eta", flags.eta, "Override the multiplicative-weights step size");
}

void add_sweep(CLI::App* sub, SweepFlags& flags, const std::string& seed_flag) {
  sub->add_option("--snr", flags.snr, "SNR grid in dB, start:step:stop or a comma list")
      ->capture_default_str();
  sub->add_option("--subset", flags.subset, "Signals decoded per grid point")
      ->capture_default_str();
  sub->add_option(seed_flag, flags.seed, "Subset and noise seed")->capture_default_str();
  sub->add_option("--lambda-factor", flags.lambda_factor, "lambda = factor * ||Phi^T y||_inf")
      ->capture_default_str();
  sub->add_option("--max-iter", flags.max_iter, "Decoder iteration cap")->capture_default_str();
  sub->add_option("--tol", flags.tol, "Decoder relative objective tolerance")
      ->capture_default_str();
  sub->add_option("--noise", flags.noise, "Where noise enters: signal or measurement")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn and evaluate secant-preserving measurement matrices", "amuse"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.option_defaults()->take_last();
  app.set_config("--config", "", "JSON file of option defaults for the subcommand; flags win");
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::error);

  amuse::cli::GenDataArgs gen;
  {
    auto* sub = command(app, "gen-data", "Write the translated-squares corpus");
    sub->add_option("--side", gen.side, "Image side length")->capture_default_str();
    sub->add_option("--square", gen.square, "Square side length")->capture_default_str();
    sub->add_option("--out", gen.out, "Output dataset CSV")->required();
  }

  amuse::cli::LearnArgs learn;
  {
    auto* sub = command(app, "learn", "Solve the game and write the learned embedding");
    add_data(sub, learn.data);
    sub->add_option("--rank", learn.rank, "Number of game rounds r")->capture_default_str();
    sub->add_option("--trace", learn.trace, "'auto' or a trace budget")->capture_default_str();
    add_secants(sub, learn.secants);
    add_game(sub, learn.game);
    sub->add_option("--error-inf", learn.error_inf, "Assumed ||e||_inf for the model bound")
        ->capture_default_str();
    sub->add_option("--out", learn.out, "Embedding JSON")->required();
    sub->add_option("--iterations", learn.iterations,
                    "Per-iteration CSV (default: next to --out)");
    sub->add_option("--report", learn.report, "Also write the printed report here");
  }

  amuse::cli::EvalRicArgs eval;
  {
    auto* sub = command(app, "eval-ric", "Empirical RIC of an embedding on a secant set");
    add_data(sub, eval.data);
    sub->add_option("--embedding", eval.embedding, "Embedding JSON")->required();
    add_secants(sub, eval.secants);
    sub->add_option("--json", eval.json, "Also write the report here");
    sub->add_option("--table", eval.table, "Append a row to this CSV");
  }

  amuse::cli::BaselineArgs baseline;
  {
    auto* sub = command(app, "baseline", "Build a PCA or Gaussian embedding");
    sub->add_option("--kind", baseline.kind, "pca or gaussian")->required();
    add_data(sub, baseline.data);
    sub->add_option("--rank", baseline.rank, "Rows of the measurement matrix")
        ->capture_default_str();
    sub->add_option("--trace", baseline.trace, "'auto' or a trace budget")->capture_default_str();
    add_secants(sub, baseline.secants);
    sub->add_option("--gaussian-seed", baseline.gaussian_seed, "Seed for the Gaussian rows")
        ->capture_default_str();
    sub->add_option("--out", baseline.out, "Embedding JSON")->required();
  }

  amuse::cli::GenCheckArgs check;
  {
    auto* sub = command(app, "gen-check", "Test distortion near the training points");
    add_data(sub, check.data);
    sub->add_option("--embedding", check.embedding, "Embedding JSON")->required();
    add_secants(sub, check.secants);
    sub->add_option("--epsilon", check.epsilon, "Perturbation radius")->capture_default_str();
    sub->add_option("--trials", check.trials, "Number of perturbed points")
        ->capture_default_str();
    sub->add_option("--trial-seed", check.trial_seed, "Seed for the perturbations")
        ->capture_default_str();
    sub->add_option("--json", check.json, "Also write the report here");
  }

  amuse::cli::Fig1Args fig1;
  {
    auto* sub = command(app, "fig1", "RIC versus rank against PCA and Gaussian");
    add_data(sub, fig1.data);
    sub->add_option("--ranks", fig1.ranks, "Rank grid")->capture_default_str();
    sub->add_option("--mode", fig1.mode, "fresh or prefix")->capture_default_str();
    sub->add_option("--trace", fig1.trace, "'auto' or a shared trace budget")
        ->capture_default_str();
    add_secants(sub, fig1.secants);
    add_game(sub, fig1.game);
    sub->add_option("--gaussian-seed", fig1.gaussian_seed, "Seed for the Gaussian rows")
        ->capture_default_str();
    sub->add_option("--out", fig1.out, "Output CSV")->required();
  }

  amuse::cli::Fig2Args fig2;
  {
    auto* sub = command(app, "fig2", "Recovery MSE versus SNR, learned against Gaussian");
    add_data(sub, fig2.data);
    sub->add_option("--rank", fig2.rank, "Rows of both matrices")->capture_default_str();
    add_secants(sub, fig2.secants);
    add_game(sub, fig2.game);
    add_sweep(sub, fig2.sweep, "--sweep-seed");
    sub->add_option("--gaussian-seed", fig2.gaussian_seed, "Seed for the Gaussian rows")
        ->capture_default_str();
    sub->add_option("--out", fig2.out, "Output CSV")->required();
    sub->add_option("--report", fig2.report, "Also write snr_db,label,mean_mse here");
  }

  amuse::cli::CsSweepArgs sweep;
  {
    auto* sub = command(app, "cs-sweep", "Recovery MSE versus SNR for saved embeddings");
    add_data(sub, sweep.data);
    sub->add_option("--embeddings", sweep.embeddings, "Embedding JSON files")
        ->required()
        ->delimiter(',');
    add_sweep(sub, sweep.sweep, "--seed");
    sub->add_option("--out", sweep.out, "Output CSV")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "gen-data") return amuse::cli::run_gen_data(gen);
    if (name == "learn") return amuse::cli::run_learn(learn);
    if (name == "eval-ric") return amuse::cli::run_eval_ric(eval);
    if (name == "baseline") return amuse::cli::run_baseline(baseline);
    if (name == "gen-check") return amuse::cli::run_gen_check(check);
    if (name == "fig1") return amuse::cli::run_fig1(fig1);
    if (name == "fig2") return amuse::cli::run_fig2(fig2);
    if (name == "cs-sweep") return amuse::cli::run_cs_sweep(sweep);
  } catch (const amuse::cli::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsageError;
}
