#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace amuse::cli {

/// Bad flag combination detected after parsing; mapped to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flags shared by every command that builds a secant set.
struct SecantFlags {
  std::string count = "2000";  // integer or "all"
  std::uint64_t seed = 7;
  double min_distance = 1e-12;
};

/// Solver knobs exposed on learn, fig1 and fig2.
struct GameFlags {
  double eig_tol = 1e-9;
  std::optional<double> radius;
  std::optional<double> eta;
};

struct GenDataArgs {
  int side = 16;
  int square = 4;
  std::string out;
};

struct LearnArgs {
  std::string data;
  long rank = 100;
  std::string trace = "auto";
  SecantFlags secants;
  GameFlags game;
  double error_inf = 0.0;
  std::string out;
  std::string iterations;  // empty: derived from out
  std::string report;      // optional JSON copy of the printed report
};

struct EvalRicArgs {
  std::string data;
  std::string embedding;
  SecantFlags secants;
  std::string json;
  std::string table;  // CSV appended one row per call
};

struct BaselineArgs {
  std::string kind;
  std::string data;
  long rank = 100;
  std::string trace = "auto";
  SecantFlags secants;
  std::uint64_t gaussian_seed = 1;
  std::string out;
};

struct GenCheckArgs {
  std::string data;
  std::string embedding;
  SecantFlags secants;
  double epsilon = 0.05;
  int trials = 500;
  std::uint64_t trial_seed = 11;
  std::string json;
};

struct Fig1Args {
  std::string data;
  std::string ranks = "10,30,60";
  std::string mode = "fresh";
  std::string trace = "auto";
  SecantFlags secants;
  GameFlags game;
  std::uint64_t gaussian_seed = 1;
  std::string out;
};

struct SweepFlags {
  std::string snr = "5:5:40";
  long subset = 50;
  std::uint64_t seed = 0;
  double lambda_factor = 0.1;
  int max_iter = 3000;
  double tol = 1e-7;
  std::string noise = "signal";
};

struct Fig2Args {
  std::string data;
  long rank = 100;
  SecantFlags secants;
  GameFlags game;
  SweepFlags sweep;
  std::uint64_t gaussian_seed = 1;
  std::string out;
  std::string report;  // optional long-form snr_db,label,mean_mse table
};

struct CsSweepArgs {
  std::string data;
  std::vector<std::string> embeddings;
  SweepFlags sweep;
  std::string out;
};

int run_gen_data(const GenDataArgs& args);
int run_learn(const LearnArgs& args);
int run_eval_ric(const EvalRicArgs& args);
int run_baseline(const BaselineArgs& args);
int run_gen_check(const GenCheckArgs& args);
int run_fig1(const Fig1Args& args);
int run_fig2(const Fig2Args& args);
int run_cs_sweep(const CsSweepArgs& args);

}  // namespace amuse::cli
