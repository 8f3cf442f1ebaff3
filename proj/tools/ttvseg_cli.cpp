// Command-line driver: segment one image, sweep (lam, a) against ground
// truth, or write the synthetic phantoms.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ttvseg/image_io.hpp"
#include "ttvseg/kernels.hpp"
#include "ttvseg/phantom.hpp"
#include "ttvseg/pipeline.hpp"

namespace {

using ttvseg::RunConfig;

struct RunFlags {
  RunConfig values;
  std::string ground_truth;
  std::string regularizer = "ttv";
  std::string config_file;
  std::vector<CLI::Option*> opts;
  CLI::Option* gt_opt = nullptr;
  CLI::Option* reg_opt = nullptr;
};

void add_run_options(CLI::App* app, RunFlags& f) {
  RunConfig& v = f.values;
  app->add_option("--config", f.config_file, "JSON file with the fields of a report's config block")
      ->check(CLI::ExistingFile);
  f.opts = {
      app->add_option("--input", v.input, "Input image (PGM P2/P5 or PNG)"),
      app->add_option("--output-dir", v.output_dir, "Directory for artifacts"),
      app->add_option("--phases", v.phases, "Number of phases N")->check(CLI::Range(2, 64)),
      app->add_option("--lam", v.lam, "Regularization weight"),
      app->add_option("--a", v.a, "TL1 sparsity parameter"),
      app->add_option("--beta1", v.beta1, "Penalty for U = V"),
      app->add_option("--beta2", v.beta2, "Penalty for grad V = D"),
      app->add_option("--max-iter", v.max_iter, "Iteration cap"),
      app->add_option("--tol", v.tol, "Stop when relative membership change drops below"),
      app->add_option("--noise-variance", v.noise_variance, "Gaussian noise variance (0 = none)"),
      app->add_option("--noise-seed", v.noise_seed, "Seed of the noise stream"),
      app->add_flag("--include-background", v.include_background,
                    "Average scores over all phases instead of foreground only"),
  };
  f.gt_opt = app->add_option("--ground-truth", f.ground_truth,
                             "Label image whose sorted intensity levels define phases 0..N-1");
  f.reg_opt = app->add_option("--regularizer", f.regularizer, "ttv or tv")
                  ->check(CLI::IsMember({"ttv", "tv"}));
}

// Config file first, explicit flags on top.
RunConfig resolve(const RunFlags& f) {
  RunConfig c;
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    c = ttvseg::run_config_from_json(nlohmann::json::parse(in));
  }
  const RunConfig& v = f.values;
  auto given = [&](std::size_t i) { return f.opts[i]->count() > 0; };
  if (given(0)) c.input = v.input;
  if (given(1)) c.output_dir = v.output_dir;
  if (given(2)) c.phases = v.phases;
  if (given(3)) c.lam = v.lam;
  if (given(4)) c.a = v.a;
  if (given(5)) c.beta1 = v.beta1;
  if (given(6)) c.beta2 = v.beta2;
  if (given(7)) c.max_iter = v.max_iter;
  if (given(8)) c.tol = v.tol;
  if (given(9)) c.noise_variance = v.noise_variance;
  if (given(10)) c.noise_seed = v.noise_seed;
  if (given(11)) c.include_background = v.include_background;
  if (f.gt_opt->count() > 0) c.ground_truth = f.ground_truth;
  if (f.reg_opt->count() > 0) c.regularizer = ttvseg::parse_regularizer(f.regularizer);
  return c;
}

void print_summary(const ttvseg::SegmentationReport& r) {
  std::cout << "iterations: " << r.iterations << "  final change: " << r.final_rel_change
            << "  solve: " << r.solve_seconds << " s\n";
  if (r.scores) {
    for (const auto& s : r.scores->regions) {
      std::cout << "phase " << s.phase << ": dice " << s.dice << "  jaccard " << s.jaccard << '\n';
    }
    std::cout << "mean dice " << r.scores->mean_dice << "  mean jaccard " << r.scores->mean_jaccard
              << (r.scores->includes_background ? " (all phases)\n" : " (foreground)\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy-membership image segmentation with transformed total variation"};
  app.require_subcommand(1);
  std::string simd = "auto";
  app.add_option("--simd", simd, "Kernel backend: auto, scalar, avx2 or neon")
      ->check(CLI::IsMember({"auto", "scalar", "avx2", "neon"}));

  RunFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "Segment one image");
  add_run_options(run_cmd, run_flags);

  RunFlags sweep_flags;
  std::vector<double> lam_grid{0.0025, 0.005, 0.01, 0.02, 0.05};
  std::vector<double> a_grid{10.0};
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Grid search over (lam, a) by mean DICE");
  add_run_options(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--lam-grid", lam_grid, "Comma-separated lam values")->delimiter(',');
  sweep_cmd->add_option("--a-grid", a_grid, "Comma-separated a values")->delimiter(',');

  std::string kind = "vessel";
  std::string phantom_out;
  CLI::App* phantom_cmd = app.add_subcommand("phantom", "Write a synthetic test image (PGM)");
  phantom_cmd->add_option("--kind", kind, "vessel (2 levels) or brain (4 levels)")
      ->check(CLI::IsMember({"vessel", "brain"}));
  phantom_cmd->add_option("--output", phantom_out, "Output PGM path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simd == "scalar") ttvseg::kernels::set_active(ttvseg::kernels::Backend::Scalar);
    if (simd == "avx2") ttvseg::kernels::set_active(ttvseg::kernels::Backend::Avx2);
    if (simd == "neon") ttvseg::kernels::set_active(ttvseg::kernels::Backend::Neon);

    if (*phantom_cmd) {
      const ttvseg::ImageGrid img = kind == "brain" ? ttvseg::brain_phantom() : ttvseg::vessel_phantom();
      std::vector<std::uint8_t> px(img.values().begin(), img.values().end());
      ttvseg::write_pgm(phantom_out, img.rows(), img.cols(), px);
      return EXIT_SUCCESS;
    }
    if (*run_cmd) {
      const auto out = ttvseg::run(resolve(run_flags));
      print_summary(out.report);
      return EXIT_SUCCESS;
    }
    const auto result = ttvseg::sweep(resolve(sweep_flags), lam_grid, a_grid);
    for (const auto& p : result.grid) {
      std::cout << "lam " << p.lam << "  a " << p.a << "  mean dice " << p.mean_dice << '\n';
    }
    std::cout << "best: lam " << result.best.report.config.lam << "  a "
              << result.best.report.config.a << '\n';
    print_summary(result.best.report);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
