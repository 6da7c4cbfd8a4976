// Command-line front end: batch experiment runs from a config file, packaged
// demo scenarios, and a built-in oracle selftest.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "guidelab/guidance.hpp"
#include "guidelab/harness.hpp"
#include "guidelab/metrics.hpp"

namespace fs = std::filesystem;
using namespace guidelab;

namespace {

int execute_grid(ExperimentConfig cfg, const std::vector<std::uint64_t>& seed_override,
                 const std::string& out_override, bool timing) {
  if (!seed_override.empty()) cfg.seeds = seed_override;
  if (!out_override.empty()) cfg.out_dir = out_override;

  const ResultTable table = run_grid(cfg);
  for (const std::string& f : table.failures) std::cerr << "failed: " << f << "\n";
  if (table.rows.empty()) {
    std::cerr << "no cells completed\n";
    return 1;
  }

  fs::create_directories(cfg.out_dir);
  const std::string csv_path = (fs::path(cfg.out_dir) / "results.csv").string();
  write_csv(table, csv_path, timing);
  std::cout << "wrote " << table.rows.size() << " rows to " << csv_path << "\n";
  for (const auto& [x, y] : cfg.emit_series) {
    const std::string prefix =
        (fs::path(cfg.out_dir) / ("tradeoff_" + x + "_" + y + "_")).string();
    emit_tradeoff_data(table, x, y, prefix);
    std::cout << "wrote series " << prefix << "<method>.dat\n";
  }
  return table.failures.empty() ? 0 : 1;
}

// ---- selftest: quick exact-oracle checks, no test framework needed ----

struct SelftestReport {
  int failures = 0;
  void check(bool ok, const std::string& name) {
    std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  }
};

void selftest_schedule(SelftestReport& rep) {
  const NoiseSchedule s = make_linear_schedule(4, 0.1, 0.4);
  bool ok = std::abs(s.beta(2) - 0.2) < 1e-15 && std::abs(s.alpha_bar(1) - 0.9) < 1e-15 &&
            std::abs(s.alpha_bar(4) - 0.3024) < 1e-12;
  for (int t = 2; t <= 4; ++t) ok = ok && s.alpha_bar(t) < s.alpha_bar(t - 1);
  rep.check(ok, "linear schedule values and monotone alpha_bar");
}

void selftest_tweedie(SelftestReport& rep) {
  // Closed-form posterior mean for N(mu, s2 I):
  //   E[x0|xt] = mu + sqrt(ab) s2 / (ab s2 + 1 - ab) (xt - sqrt(ab) mu)
  const NoiseSchedule s = make_linear_schedule(50, 1e-3, 0.05);
  const GaussianMixturePrior prior = GaussianMixturePrior::single(
      Eigen::VectorXd::Constant(1, 0.7), 0.35);
  const ScoreFn fn = make_score_fn(prior, s);
  double worst = 0.0;
  for (int t = 1; t <= 50; t += 7) {
    const double ab = s.alpha_bar(t);
    for (double x = -3.0; x <= 3.0; x += 0.75) {
      StateVector st{Eigen::VectorXd::Constant(1, x), t};
      const double got = tweedie_denoise(st, s, fn).values[0];
      const double coef = std::sqrt(ab) * 0.35 / (ab * 0.35 + 1.0 - ab);
      const double want = 0.7 + coef * (x - std::sqrt(ab) * 0.7);
      worst = std::max(worst, std::abs(got - want));
    }
  }
  rep.check(worst < 1e-9, "tweedie matches the Gaussian posterior mean");
}

void selftest_score(SelftestReport& rep) {
  const GaussianMixturePrior prior({Eigen::VectorXd::Constant(1, -1.0),
                                    Eigen::VectorXd::Constant(1, 1.5)},
                                   {0.4, 0.8}, {0.3, 0.7});
  double worst = 0.0;
  for (double ab : {0.9, 0.5, 0.1}) {
    for (double x = -3.0; x <= 3.0; x += 0.5) {
      Eigen::VectorXd v = Eigen::VectorXd::Constant(1, x);
      const double h = 1e-5;
      const double fd = (prior.log_marginal_density(Eigen::VectorXd::Constant(1, x + h), ab) -
                         prior.log_marginal_density(Eigen::VectorXd::Constant(1, x - h), ab)) /
                        (2 * h);
      const double got = prior.marginal_score(v, ab)[0];
      worst = std::max(worst, std::abs(got - fd) / std::max(1.0, std::abs(fd)));
    }
  }
  rep.check(worst < 1e-4, "mixture score matches finite differences");
}

void selftest_softmax(SelftestReport& rep) {
  Eigen::VectorXd r(2);
  r << 0.0, std::log(3.0);
  const Eigen::VectorXd w = softmax_weights(r, 1.0);
  bool ok = std::abs(w[0] - 0.25) < 1e-12 && std::abs(w[1] - 0.75) < 1e-12;
  Eigen::VectorXd r2(2);
  r2 << 2.0, 4.0;
  const Eigen::VectorXd w2 = softmax_weights(r2, 2.0);
  ok = ok && std::abs(w2[1] - std::exp(1.0) / (1.0 + std::exp(1.0))) < 1e-12;
  rep.check(ok, "softmax hand values");
}

void selftest_zoo(SelftestReport& rep) {
  // Central differences are exact on a linear function, so a single unit
  // probe recovers the slope with no error at all.
  const RewardModel lin = linear_reward(Eigen::VectorXd::Constant(1, 3.0));
  const Eigen::VectorXd g = zero_order_gradient(
      lin.evaluate, Eigen::VectorXd::Constant(1, 0.4), {0.5, 1},
      {Eigen::VectorXd::Constant(1, 1.0)});
  NfeCounters nfe;
  RngStream rng(7, RngPhase::zoo, 0, 0);
  zero_order_gradient(lin, Eigen::VectorXd::Constant(1, 0.4), {0.5, 6}, rng, nfe);
  rep.check(std::abs(g[0] - 3.0) < 1e-12 && nfe.reward_evals == 12,
            "zero-order slope exact for a unit probe on a linear reward");
}

void selftest_kmeans(SelftestReport& rep) {
  std::vector<Eigen::VectorXd> pts;
  for (double v : {0.0, 0.1, 10.0, 10.1}) pts.push_back(Eigen::VectorXd::Constant(1, v));
  RngStream rng(11, RngPhase::cluster, 0, 0);
  const KmeansResult km = kmeans_cluster(pts, 2, 20, rng);
  rep.check(km.assignments[0] == km.assignments[1] && km.assignments[2] == km.assignments[3] &&
                km.assignments[0] != km.assignments[2],
            "kmeans separates the two groups");
}

void selftest_rng(SelftestReport& rep) {
  RngStream a(2024, RngPhase::reverse, 3, 17);
  RngStream b(2024, RngPhase::reverse, 3, 17);
  RngStream c(2024, RngPhase::reverse, 4, 17);
  bool ok = true;
  for (int i = 0; i < 8; ++i) ok = ok && a.next_u64() == b.next_u64();
  ok = ok && a.next_u64() != c.next_u64();
  rep.check(ok, "substreams reproducible and distinct");
}

void selftest_mmd(SelftestReport& rep) {
  std::vector<Eigen::VectorXd> xs;
  RngStream rng(5, RngPhase::scratch, 0, 0);
  for (int i = 0; i < 40; ++i) xs.push_back(rng.normal_vector(2));
  rep.check(std::abs(mmd2_rbf(xs, xs)) < 1e-12, "mmd of identical samples is zero");
}

void selftest_reduction(SelftestReport& rep) {
  const NoiseSchedule s = make_linear_schedule(40, 1e-4, 0.02);
  const GaussianMixturePrior prior = GaussianMixturePrior::single(Eigen::VectorXd::Zero(1), 1.0);
  const RewardModel lin = linear_reward(Eigen::VectorXd::Constant(1, 1.0));
  GuidanceConfig cfg;
  cfg.n_particles = 1;
  const RunResult unguided = run_unguided(prior, s, lin, 2024);
  const RunResult code1 = run_code(cfg, prior, lin, s, 2024);
  cfg.guidance_scale = 0.0;
  const RunResult grad0 = run_gradient_only(cfg, prior, lin, s, 2024);
  rep.check(unguided.final.values == code1.final.values &&
                unguided.final.values == grad0.final.values,
            "single-particle and zero-scale runs reduce to the plain sampler");
}

int run_selftest() {
  SelftestReport rep;
  selftest_schedule(rep);
  selftest_tweedie(rep);
  selftest_score(rep);
  selftest_softmax(rep);
  selftest_zoo(rep);
  selftest_kmeans(rep);
  selftest_rng(rep);
  selftest_mmd(rep);
  selftest_reduction(rep);
  if (rep.failures == 0) {
    std::cout << "selftest: all checks passed\n";
    return 0;
  }
  std::cout << "selftest: " << rep.failures << " check(s) failed\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"guidelab: reward-guided diffusion sampling on analytic priors"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  bool timing = false;

  CLI::App* run = app.add_subcommand("run", "run the experiment grid from a config file");
  run->add_option("config", config_path, "path to a JSON experiment config")->required();
  run->add_option("--seed,-s", seeds, "override the config's seed list (repeatable)");
  run->add_option("--out,-o", out_dir, "output directory (overrides config)");
  run->add_flag("--timing", timing,
                "record wall times in the CSV (costs byte-reproducibility)");

  std::string scenario;
  CLI::App* demo = app.add_subcommand("demo", "run a packaged scenario (demo list to see them)");
  demo->add_option("scenario", scenario, "scenario name, or 'list'")->required();
  demo->add_option("--seed,-s", seeds, "override the scenario's seed list (repeatable)");
  demo->add_option("--out,-o", out_dir, "output directory (overrides scenario default)");
  demo->add_flag("--timing", timing,
                 "record wall times in the CSV (costs byte-reproducibility)");

  app.add_subcommand("selftest", "run the built-in exact-oracle checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return execute_grid(load_config(config_path), seeds, out_dir, timing);
    }
    if (demo->parsed()) {
      if (scenario == "list") {
        for (const std::string& n : demo_names()) std::cout << n << "\n";
        return 0;
      }
      return execute_grid(parse_config(demo_config(scenario)), seeds, out_dir, timing);
    }
    return run_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
