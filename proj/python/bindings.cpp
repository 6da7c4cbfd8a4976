// Python bindings for the core sampler operations. The module mirrors the
// C++ API closely; thin lambdas adapt the pieces that use raw pointers
// (RunOptions) or explicit RNG streams (sampling helpers) into seed-taking
// keyword arguments.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>

#include "guidelab/guidance.hpp"
#include "guidelab/metrics.hpp"

namespace py = pybind11;
using namespace guidelab;

namespace {

// Shared kwargs -> RunOptions plumbing for every runner. The StateVector
// referenced by the options must outlive the run, so the caller owns it.
RunOptions make_options(const GaussianMixturePrior* conditional_prior,
                        const std::optional<Eigen::VectorXd>& sdedit_reference,
                        double sdedit_eta, StateVector& ref_storage) {
  RunOptions opts;
  opts.conditional_prior = conditional_prior;
  if (sdedit_reference) {
    ref_storage = StateVector{*sdedit_reference, 0};
    opts.sdedit_reference = &ref_storage;
    opts.sdedit_eta = sdedit_eta;
  }
  return opts;
}

template <typename Runner>
auto bind_runner(Runner runner) {
  return [runner](const GuidanceConfig& cfg, const GaussianMixturePrior& prior,
                  const RewardModel& reward, const NoiseSchedule& schedule,
                  std::uint64_t seed, const GaussianMixturePrior* conditional_prior,
                  std::optional<Eigen::VectorXd> sdedit_reference, double sdedit_eta) {
    StateVector ref;
    const RunOptions opts =
        make_options(conditional_prior, sdedit_reference, sdedit_eta, ref);
    return runner(cfg, prior, reward, schedule, seed, opts);
  };
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Analytic diffusion priors with reward-guided sampling";

  // ---- schedules and states ----
  py::class_<NoiseSchedule>(m, "NoiseSchedule")
      .def_readonly("T", &NoiseSchedule::T)
      .def("beta", &NoiseSchedule::beta, py::arg("t"))
      .def("alpha", &NoiseSchedule::alpha, py::arg("t"))
      .def("alpha_bar", &NoiseSchedule::alpha_bar, py::arg("t"));
  m.def("make_linear_schedule", &make_linear_schedule, py::arg("T"), py::arg("beta_start"),
        py::arg("beta_end"));
  m.def("schedule_from_betas", &schedule_from_betas, py::arg("betas"));

  py::class_<StateVector>(m, "StateVector")
      .def(py::init([](Eigen::VectorXd values, int t) {
             return StateVector{std::move(values), t};
           }),
           py::arg("values"), py::arg("t"))
      .def_readwrite("values", &StateVector::values)
      .def_readwrite("t", &StateVector::t);

  // ---- priors ----
  py::class_<GaussianMixturePrior>(m, "GaussianMixturePrior")
      .def(py::init<std::vector<Eigen::VectorXd>, std::vector<double>, std::vector<double>>(),
           py::arg("means"), py::arg("variances"), py::arg("weights"))
      .def_static("single", &GaussianMixturePrior::single, py::arg("mean"),
                  py::arg("variance"))
      .def_property_readonly("dim", &GaussianMixturePrior::dim)
      .def_property_readonly("components", &GaussianMixturePrior::components)
      .def("log_marginal_density", &GaussianMixturePrior::log_marginal_density,
           py::arg("x"), py::arg("alpha_bar"))
      .def("marginal_score", &GaussianMixturePrior::marginal_score, py::arg("x"),
           py::arg("alpha_bar"))
      .def("marginal_score_jacobian", &GaussianMixturePrior::marginal_score_jacobian,
           py::arg("x"), py::arg("alpha_bar"))
      .def("mixture_mean", &GaussianMixturePrior::mixture_mean)
      .def("mixture_covariance", &GaussianMixturePrior::mixture_covariance)
      .def(
          "sample",
          [](const GaussianMixturePrior& p, std::uint64_t seed, int count) {
            RngStream rng(seed, RngPhase::scratch, 0, 0);
            std::vector<Eigen::VectorXd> out;
            out.reserve(count);
            for (int i = 0; i < count; ++i) out.push_back(p.sample(rng));
            return out;
          },
          py::arg("seed"), py::arg("count") = 1);

  // ---- forward/reverse diffusion through the analytic score ----
  m.def(
      "forward_noise",
      [](const StateVector& x0, int t, const NoiseSchedule& s, const Eigen::VectorXd& noise) {
        return forward_noise(x0, t, s, noise);
      },
      py::arg("x0"), py::arg("t"), py::arg("schedule"), py::arg("noise"));
  m.def(
      "reverse_step",
      [](const StateVector& x_t, const NoiseSchedule& s, const GaussianMixturePrior& prior,
         const Eigen::VectorXd& noise) {
        return reverse_step(x_t, s, make_score_fn(prior, s), noise);
      },
      py::arg("x_t"), py::arg("schedule"), py::arg("prior"), py::arg("noise"));
  m.def(
      "tweedie_denoise",
      [](const StateVector& x_t, const NoiseSchedule& s, const GaussianMixturePrior& prior) {
        return tweedie_denoise(x_t, s, make_score_fn(prior, s));
      },
      py::arg("x_t"), py::arg("schedule"), py::arg("prior"));
  m.def("tweedie_jacobian", &tweedie_jacobian, py::arg("prior"), py::arg("schedule"),
        py::arg("x"), py::arg("t"));
  m.def(
      "sdedit_init",
      [](const StateVector& reference, double eta, const NoiseSchedule& s, int count,
         std::uint64_t seed) {
        auto [set, start_t] = sdedit_init(reference, eta, s, count, seed);
        return py::make_tuple(set.particles, start_t);
      },
      py::arg("reference"), py::arg("eta"), py::arg("schedule"), py::arg("count"),
      py::arg("seed"));

  // ---- rewards ----
  py::class_<RewardModel>(m, "RewardModel")
      .def_readonly("name", &RewardModel::name)
      .def("evaluate", [](const RewardModel& r, const Eigen::VectorXd& x) {
        return r.evaluate(x);
      })
      .def("has_gradient", &RewardModel::has_gradient)
      .def("analytic_gradient", [](const RewardModel& r, const Eigen::VectorXd& x) {
        if (!r.has_gradient()) {
          throw std::invalid_argument("reward '" + r.name + "' has no analytic gradient");
        }
        return r.analytic_gradient(x);
      });
  m.def("linear_reward", &linear_reward, py::arg("a"));
  m.def("target_reward", &target_reward, py::arg("target"), py::arg("scale"));
  m.def("quantized_reward", &quantized_reward, py::arg("base"), py::arg("step"));
  m.def("weighted_sum_reward", &weighted_sum_reward, py::arg("gamma1"), py::arg("r1"),
        py::arg("gamma2"), py::arg("r2"));

  py::class_<ZooConfig>(m, "ZooConfig")
      .def(py::init<>())
      .def(py::init([](double sigma, int n_probes) {
             return ZooConfig{sigma, n_probes};
           }),
           py::arg("sigma"), py::arg("n_probes"))
      .def_readwrite("sigma", &ZooConfig::sigma)
      .def_readwrite("n_probes", &ZooConfig::n_probes);
  m.def(
      "zero_order_gradient",
      [](const RewardModel& reward, const Eigen::VectorXd& x, const ZooConfig& cfg,
         std::uint64_t seed) {
        NfeCounters nfe;
        RngStream rng(seed, RngPhase::zoo, 0, 0);
        Eigen::VectorXd g = zero_order_gradient(reward, x, cfg, rng, nfe);
        return py::make_tuple(g, nfe);
      },
      py::arg("reward"), py::arg("x"), py::arg("config"), py::arg("seed"),
      "Antithetic probe estimate of grad reward(x); returns (gradient, counters)");

  // ---- samplers ----
  py::enum_<Sampler>(m, "Sampler")
      .value("bon", Sampler::bon)
      .value("code", Sampler::code)
      .value("grad_only", Sampler::grad_only)
      .value("unicode", Sampler::unicode);
  py::enum_<SelectionRule>(m, "SelectionRule")
      .value("greedy", SelectionRule::greedy)
      .value("multinomial", SelectionRule::multinomial);
  py::enum_<GradMode>(m, "GradMode")
      .value("analytic", GradMode::analytic)
      .value("zero_order", GradMode::zero_order);
  py::enum_<RescaleMode>(m, "RescaleMode")
      .value("fixed", RescaleMode::fixed)
      .value("cfg_rescaled", RescaleMode::cfg_rescaled);

  py::class_<GuidanceConfig>(m, "GuidanceConfig")
      .def(py::init<>())
      .def_readwrite("n_particles", &GuidanceConfig::n_particles)
      .def_readwrite("block_sample", &GuidanceConfig::block_sample)
      .def_readwrite("block_grad", &GuidanceConfig::block_grad)
      .def_readwrite("temperature", &GuidanceConfig::temperature)
      .def_readwrite("guidance_scale", &GuidanceConfig::guidance_scale)
      .def_readwrite("sampler", &GuidanceConfig::sampler)
      .def_readwrite("selection", &GuidanceConfig::selection)
      .def_readwrite("particle_schedule", &GuidanceConfig::particle_schedule)
      .def_readwrite("grad_window_start", &GuidanceConfig::grad_window_start)
      .def_readwrite("grad_window_end", &GuidanceConfig::grad_window_end)
      .def_readwrite("cluster_k", &GuidanceConfig::cluster_k)
      .def_readwrite("grad_repeats", &GuidanceConfig::grad_repeats)
      .def_readwrite("grad_mode", &GuidanceConfig::grad_mode)
      .def_readwrite("rescale_mode", &GuidanceConfig::rescale_mode)
      .def_readwrite("cfg_scale", &GuidanceConfig::cfg_scale)
      .def_readwrite("rescale_eps", &GuidanceConfig::rescale_eps)
      .def_readwrite("rescale_max_factor", &GuidanceConfig::rescale_max_factor)
      .def_readwrite("zoo", &GuidanceConfig::zoo)
      .def("validate", &GuidanceConfig::validate);

  py::class_<NfeCounters>(m, "NfeCounters")
      .def_readonly("denoiser_calls", &NfeCounters::denoiser_calls)
      .def_readonly("reward_evals", &NfeCounters::reward_evals)
      .def_readonly("gradient_evals", &NfeCounters::gradient_evals);
  py::class_<RunMetrics>(m, "RunMetrics")
      .def_readonly("reward_mean", &RunMetrics::reward_mean)
      .def_readonly("reward_std", &RunMetrics::reward_std)
      .def_readonly("nfe", &RunMetrics::nfe)
      .def_readonly("wall_ms", &RunMetrics::wall_ms);
  py::class_<RunResult>(m, "RunResult")
      .def_readonly("final", &RunResult::final)
      .def_readonly("final_reward", &RunResult::final_reward)
      .def_readonly("survivors", &RunResult::survivors)
      .def_readonly("survivor_rewards", &RunResult::survivor_rewards)
      .def_readonly("metrics", &RunResult::metrics);

  m.def(
      "run_unguided",
      [](const GaussianMixturePrior& prior, const NoiseSchedule& schedule,
         const RewardModel& reward, std::uint64_t seed,
         const GaussianMixturePrior* conditional_prior,
         std::optional<Eigen::VectorXd> sdedit_reference, double sdedit_eta) {
        StateVector ref;
        const RunOptions opts =
            make_options(conditional_prior, sdedit_reference, sdedit_eta, ref);
        return run_unguided(prior, schedule, reward, seed, opts);
      },
      py::arg("prior"), py::arg("schedule"), py::arg("reward"), py::arg("seed"),
      py::arg("conditional_prior") = nullptr, py::arg("sdedit_reference") = std::nullopt,
      py::arg("sdedit_eta") = 0.6);

  m.def("run_bon", bind_runner(&run_bon), py::arg("config"), py::arg("prior"),
        py::arg("reward"), py::arg("schedule"), py::arg("seed"),
        py::arg("conditional_prior") = nullptr, py::arg("sdedit_reference") = std::nullopt,
        py::arg("sdedit_eta") = 0.6);
  m.def("run_code", bind_runner(&run_code), py::arg("config"), py::arg("prior"),
        py::arg("reward"), py::arg("schedule"), py::arg("seed"),
        py::arg("conditional_prior") = nullptr, py::arg("sdedit_reference") = std::nullopt,
        py::arg("sdedit_eta") = 0.6);
  m.def("run_gradient_only", bind_runner(&run_gradient_only), py::arg("config"),
        py::arg("prior"), py::arg("reward"), py::arg("schedule"), py::arg("seed"),
        py::arg("conditional_prior") = nullptr, py::arg("sdedit_reference") = std::nullopt,
        py::arg("sdedit_eta") = 0.6);
  m.def("run_unicode", bind_runner(&run_unicode), py::arg("config"), py::arg("prior"),
        py::arg("reward"), py::arg("schedule"), py::arg("seed"),
        py::arg("conditional_prior") = nullptr, py::arg("sdedit_reference") = std::nullopt,
        py::arg("sdedit_eta") = 0.6);

  // ---- metrics ----
  m.def("expected_reward", &expected_reward, py::arg("samples"), py::arg("reward"));
  m.def("median_heuristic_bandwidth", &median_heuristic_bandwidth, py::arg("xs"),
        py::arg("ys"));
  m.def(
      "mmd2_rbf",
      [](const std::vector<Eigen::VectorXd>& xs, const std::vector<Eigen::VectorXd>& ys,
         std::optional<double> bandwidth) {
        return bandwidth ? mmd2_rbf(xs, ys, *bandwidth) : mmd2_rbf(xs, ys);
      },
      py::arg("xs"), py::arg("ys"), py::arg("bandwidth") = std::nullopt);
  py::class_<TiltedGaussian>(m, "TiltedGaussian")
      .def_readonly("mean", &TiltedGaussian::mean)
      .def_readonly("variance", &TiltedGaussian::variance);
  m.def("tilted_oracle", &tilted_oracle, py::arg("prior"), py::arg("a"), py::arg("lambda_"));
}
