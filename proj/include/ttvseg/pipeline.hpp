#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ttvseg/image.hpp"
#include "ttvseg/metrics.hpp"
#include "ttvseg/solver.hpp"

namespace ttvseg {

/// Everything needed to reproduce one experiment.
struct RunConfig {
  std::filesystem::path input;
  std::optional<std::filesystem::path> ground_truth;
  std::filesystem::path output_dir = "ttvseg_out";
  std::size_t phases = 2;
  Regularizer regularizer = Regularizer::TTV;
  double lam = 0.01;
  double a = 10.0;
  double beta1 = 0.25;
  double beta2 = 0.25;
  std::size_t max_iter = 200;
  double tol = 1e-4;
  double noise_variance = 0.01;
  std::uint64_t noise_seed = 20230417;
  bool include_background = false;

  SolverConfig solver_config() const;
  void validate() const;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);

struct SegmentationReport {
  RunConfig config;
  std::optional<ScoreSummary> scores;
  std::vector<double> centroids;
  std::size_t iterations = 0;
  double final_rel_change = 0.0;
  double final_energy = 0.0;
  std::vector<double> rel_change_history;
  double solve_seconds = 0.0;
  double total_seconds = 0.0;
};

/// Top-level keys: config, scores, convergence, timing.
nlohmann::json to_json(const SegmentationReport& r);

/// In-memory inputs of one experiment: the clean image (raw intensities) and
/// optional ground-truth labels.
struct Experiment {
  ImageGrid image;
  std::optional<LabelMask> truth;
};

/// Loads the input image and ground truth named by the config.
Experiment load_experiment(const RunConfig& config);

struct RunOutput {
  SegmentationReport report;
  ImageGrid noisy;
  MembershipField memberships;
  LabelMask labels;
};

/// normalize -> add noise -> fuzzy c-means -> ADMM solve -> argmax labels -> score.
RunOutput run_pipeline(const Experiment& experiment, const RunConfig& config);

/// Writes noisy.pgm, membership_<k>.pgm, labels.pgm and report.json.
void write_artifacts(const RunOutput& out, const std::filesystem::path& dir);

/// Loads, runs and writes artifacts. Inputs are read before the output
/// directory is touched, so a failed load leaves nothing behind.
RunOutput run(const RunConfig& config);

struct SweepPoint {
  double lam;
  double a;
  double mean_dice;
  double mean_jaccard;
  std::size_t iterations;
  double seconds;
};

struct SweepResult {
  RunOutput best;
  std::vector<SweepPoint> grid;
};

/// Runs the pipeline at every (lam, a) pair with the shared noise seed and
/// keeps the highest mean DICE (first one wins ties). Needs ground truth.
SweepResult sweep(const Experiment& experiment, const RunConfig& base,
                  const std::vector<double>& lam_grid, const std::vector<double>& a_grid);

/// Sweep plus artifacts for the best run and sweep.csv / sweep.json tables.
SweepResult sweep(const RunConfig& base, const std::vector<double>& lam_grid,
                  const std::vector<double>& a_grid);

}  // namespace ttvseg
