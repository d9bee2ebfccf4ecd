#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rectlab/cover.hpp"
#include "rectlab/fooling.hpp"
#include "rectlab/rect.hpp"

namespace rectlab {

/// How a grid value turns into a probability at a given n.
enum class PKind {
  p,              // the value is p
  lambda,         // p = 1 - λ/n
  pbar_exponent,  // p̄ = n^{-a}
};

struct PSpec {
  PKind kind = PKind::p;
  double value = 0;
};

/// Resolves a grid value at n; DomainError unless the result lies in (0,1).
double resolve_p(std::size_t n, const PSpec& spec);

struct ExperimentBudgets {
  std::size_t beam_width = kDefaultBeamWidth;
  std::optional<std::size_t> beam_depth;
  std::uint64_t fool_budget = kDefaultFoolBudget;
  std::uint64_t cover_budget = kDefaultCoverBudget;
  std::size_t rectangle_cap = kDefaultRectangleCap;
  /// fool_random_search per trial.
  double search_time_s = 60.0;
  std::uint64_t restart_nodes = 200'000;
};

/// Multipliers applied to predicted windows. Defaults follow the calibration
/// used by the acceptance suite.
struct ExperimentTolerances {
  double rel_lo = 0.8;
  double rel_hi = 1.25;
  double frc_ub_factor = 1.5;          // certified UB <= factor·hi
  double supp_over_onerec_factor = 0.5;  // estimate >= factor·lo
  double distinct_rows_fraction = 0.5;
  double log2_fraction = 0.9;
};

struct ExperimentConfig {
  std::string name;
  std::vector<std::size_t> n_values;
  std::vector<PSpec> p_values;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  ExperimentBudgets budgets;
  ExperimentTolerances tolerances;
  /// 0: RECTLAB_WORKERS, else hardware concurrency. Always capped by
  /// RECTLAB_WORKERS when that is set.
  std::size_t workers = 0;
  /// runtime_ms is written as 0 unless enabled, so CSVs stay byte-identical.
  bool record_runtime = false;
  bool emit_dat = false;
  std::string output_path;

  /// Throws DomainError on trials = 0, an empty grid, an unknown experiment
  /// or a grid point outside (0,1).
  void validate() const;
};

/// Parses a JSON config. Grid values come from "p", "lambda" or "pbar_exp"
/// arrays (any combination, in that order).
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

enum class PassFlag { pass, fail, na, skipped };
std::string_view to_string(PassFlag f);

struct TrialRecord {
  std::string experiment;
  std::size_t n = 0;
  double p = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string metric;
  double value = 0;
  double pred_lo = -kUnbounded;
  double pred_hi = kUnbounded;
  PassFlag pass = PassFlag::na;
  double runtime_ms = 0;
};

struct SummaryCell {
  std::size_t n = 0;
  double p = 0;
  std::string metric;
  std::size_t trials = 0;
  /// Over records with a pass/fail verdict; NaN when there are none.
  double pass_fraction = 0;
  double mean = 0;
  double stddev = 0;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<TrialRecord> records;  // sorted by (cell, trial, metric order)
  std::vector<SummaryCell> cells;
};

const std::vector<std::string>& experiment_catalog();

/// Runs every (n, grid value, trial) of the config. Trial t uses
/// derive_seed(master_seed, t). Size-guard refusals become `skipped`
/// records.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Summary cells in first-appearance order of (n, p, metric).
std::vector<SummaryCell> summarize(const std::vector<TrialRecord>& records);

std::string to_csv(const std::vector<TrialRecord>& records);
std::string summary_json(const ExperimentResult& result);
/// One block per metric: x mean lo hi, x = λ for λ grids and n otherwise.
std::string to_dat(const ExperimentResult& result, const ExperimentConfig& config);

/// Writes <output_path> (CSV), <output_path>.summary.json and optionally
/// <output_path>.dat.
void write_experiment_outputs(const ExperimentResult& result, const ExperimentConfig& config);

/// Effective worker count after RECTLAB_WORKERS capping.
std::size_t effective_workers(std::size_t requested);

}  // namespace rectlab
