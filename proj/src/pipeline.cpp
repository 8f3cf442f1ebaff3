#include "ttvseg/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "ttvseg/fcm.hpp"
#include "ttvseg/image_io.hpp"

namespace ttvseg {

using nlohmann::json;

SolverConfig RunConfig::solver_config() const {
  SolverConfig s;
  s.phases = phases;
  s.lam = lam;
  s.a = a;
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.max_iter = max_iter;
  s.tol = tol;
  s.regularizer = regularizer;
  return s;
}

void RunConfig::validate() const {
  if (input.empty()) throw std::invalid_argument("no input image given");
  if (!(noise_variance >= 0.0)) throw std::invalid_argument("noise_variance must be >= 0");
  solver_config().validate();
}

json to_json(const RunConfig& c) {
  return json{
      {"input", c.input.string()},
      {"ground_truth", c.ground_truth ? json(c.ground_truth->string()) : json(nullptr)},
      {"output_dir", c.output_dir.string()},
      {"phases", c.phases},
      {"regularizer", std::string(to_string(c.regularizer))},
      {"lam", c.lam},
      {"a", c.a},
      {"beta1", c.beta1},
      {"beta2", c.beta2},
      {"max_iter", c.max_iter},
      {"tol", c.tol},
      {"noise_variance", c.noise_variance},
      {"noise_seed", c.noise_seed},
      {"include_background", c.include_background},
  };
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  if (j.contains("input")) c.input = j.at("input").get<std::string>();
  if (j.contains("ground_truth") && !j.at("ground_truth").is_null()) {
    c.ground_truth = j.at("ground_truth").get<std::string>();
  }
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("regularizer")) c.regularizer = parse_regularizer(j.at("regularizer").get<std::string>());
  c.phases = j.value("phases", c.phases);
  c.lam = j.value("lam", c.lam);
  c.a = j.value("a", c.a);
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.max_iter = j.value("max_iter", c.max_iter);
  c.tol = j.value("tol", c.tol);
  c.noise_variance = j.value("noise_variance", c.noise_variance);
  c.noise_seed = j.value("noise_seed", c.noise_seed);
  c.include_background = j.value("include_background", c.include_background);
  return c;
}

json to_json(const SegmentationReport& r) {
  json scores = nullptr;
  if (r.scores) {
    json regions = json::array();
    for (const auto& s : r.scores->regions) {
      regions.push_back({{"phase", s.phase}, {"dice", s.dice}, {"jaccard", s.jaccard}});
    }
    scores = {{"regions", regions},
              {"mean_dice", r.scores->mean_dice},
              {"mean_jaccard", r.scores->mean_jaccard},
              {"includes_background", r.scores->includes_background}};
  }
  return json{
      {"config", to_json(r.config)},
      {"scores", scores},
      {"convergence",
       {{"iterations", r.iterations},
        {"final_rel_change", r.final_rel_change},
        {"final_energy", r.final_energy},
        {"centroids", r.centroids},
        {"rel_change_history", r.rel_change_history}}},
      {"timing", {{"solve_seconds", r.solve_seconds}, {"total_seconds", r.total_seconds}}},
  };
}

Experiment load_experiment(const RunConfig& config) {
  config.validate();
  Experiment e;
  e.image = read_image(config.input);
  if (config.ground_truth) {
    const ImageGrid truth = read_image(*config.ground_truth);
    if (!truth.same_shape(e.image)) {
      throw std::invalid_argument("ground truth is " + std::to_string(truth.rows()) + "x" +
                                  std::to_string(truth.cols()) + ", input is " +
                                  std::to_string(e.image.rows()) + "x" +
                                  std::to_string(e.image.cols()));
    }
    e.truth = labels_from_levels(truth, config.phases);
  }
  return e;
}

RunOutput run_pipeline(const Experiment& experiment, const RunConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  if (experiment.truth && (experiment.truth->rows() != experiment.image.rows() ||
                           experiment.truth->cols() != experiment.image.cols())) {
    throw std::invalid_argument("ground truth shape does not match input");
  }

  RunOutput out;
  out.noisy = add_gaussian_noise(normalize(experiment.image),
                                 NoiseSpec{0.0, config.noise_variance, config.noise_seed});

  FcmConfig fcm;
  fcm.clusters = config.phases;
  const FcmResult init = fuzzy_cmeans(out.noisy, fcm);

  const SolverConfig sc = config.solver_config();
  SolveResult sol = solve(out.noisy, sc, init.memberships, init.centroids);

  SegmentationReport& rep = out.report;
  rep.config = config;
  rep.centroids = sol.c;
  rep.iterations = sol.iterations;
  rep.final_rel_change = sol.final_rel_change;
  rep.final_energy = energy(sol.U, sol.c, out.noisy, sc);
  rep.rel_change_history = std::move(sol.rel_change_history);
  rep.solve_seconds = sol.seconds;

  out.labels = to_label_mask(sol.U);
  out.memberships = std::move(sol.U);
  if (experiment.truth) {
    rep.scores = score_all(out.labels, *experiment.truth, config.phases, config.include_background);
  }
  rep.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void write_artifacts(const RunOutput& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_unit_pgm(dir / "noisy.pgm", out.noisy);
  for (std::size_t k = 0; k < out.memberships.phases(); ++k) {
    write_unit_pgm(dir / ("membership_" + std::to_string(k) + ".pgm"), out.memberships[k]);
  }
  write_label_pgm(dir / "labels.pgm", out.labels, out.memberships.phases());
  std::ofstream report(dir / "report.json");
  report << std::setw(2) << to_json(out.report) << '\n';
  if (!report) throw std::runtime_error("cannot write " + (dir / "report.json").string());
}

RunOutput run(const RunConfig& config) {
  const Experiment e = load_experiment(config);
  RunOutput out = run_pipeline(e, config);
  write_artifacts(out, config.output_dir);
  return out;
}

SweepResult sweep(const Experiment& experiment, const RunConfig& base,
                  const std::vector<double>& lam_grid, const std::vector<double>& a_grid) {
  if (lam_grid.empty() || a_grid.empty()) throw std::invalid_argument("sweep: empty parameter grid");
  if (!experiment.truth) throw std::invalid_argument("sweep: ground truth is required to rank runs");

  SweepResult result;
  bool have_best = false;
  for (double a : a_grid) {
    for (double lam : lam_grid) {
      RunConfig cfg = base;
      cfg.lam = lam;
      cfg.a = a;
      RunOutput out = run_pipeline(experiment, cfg);
      const ScoreSummary& s = *out.report.scores;
      result.grid.push_back({lam, a, s.mean_dice, s.mean_jaccard, out.report.iterations,
                             out.report.solve_seconds});
      if (!have_best || s.mean_dice > result.best.report.scores->mean_dice) {
        result.best = std::move(out);
        have_best = true;
      }
    }
  }
  return result;
}

SweepResult sweep(const RunConfig& base, const std::vector<double>& lam_grid,
                  const std::vector<double>& a_grid) {
  const Experiment e = load_experiment(base);
  SweepResult result = sweep(e, base, lam_grid, a_grid);
  write_artifacts(result.best, base.output_dir);

  std::ofstream csv(base.output_dir / "sweep.csv");
  csv << "lam,a,mean_dice,mean_jaccard,iterations,solve_seconds\n" << std::setprecision(17);
  json table = json::array();
  for (const auto& p : result.grid) {
    csv << p.lam << ',' << p.a << ',' << p.mean_dice << ',' << p.mean_jaccard << ','
        << p.iterations << ',' << p.seconds << '\n';
    table.push_back({{"lam", p.lam},
                     {"a", p.a},
                     {"mean_dice", p.mean_dice},
                     {"mean_jaccard", p.mean_jaccard},
                     {"iterations", p.iterations},
                     {"solve_seconds", p.seconds}});
  }
  std::ofstream js(base.output_dir / "sweep.json");
  js << std::setw(2)
     << json{{"best", {{"lam", result.best.report.config.lam}, {"a", result.best.report.config.a}}},
             {"grid", table}}
     << '\n';
  return result;
}

}  // namespace ttvseg
