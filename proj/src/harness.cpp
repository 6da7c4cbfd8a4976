#include "guidelab/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace guidelab {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::uint64_t replicate_seed(std::uint64_t seed, int replicate) {
  if (replicate == 0) return seed;
  return mix64(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(replicate));
}

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw std::invalid_argument("config field '" + field + "': " + why);
}

double want_number(const json& j, const std::string& field) {
  if (!j.is_number()) bad_field(field, "expected a number");
  return j.get<double>();
}

int want_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) bad_field(field, "expected an integer");
  return j.get<int>();
}

std::string want_string(const json& j, const std::string& field) {
  if (!j.is_string()) bad_field(field, "expected a string");
  return j.get<std::string>();
}

Eigen::VectorXd want_vector(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) bad_field(field, "expected a non-empty array of numbers");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = want_number(j[i], field);
  return v;
}

GaussianMixturePrior prior_from_spec(const json& spec, const std::string& field) {
  if (!spec.is_object() || !spec.contains("components")) {
    bad_field(field, "expected an object with a 'components' array");
  }
  const json& comps = spec["components"];
  if (!comps.is_array() || comps.empty()) bad_field(field + ".components", "expected a non-empty array");
  std::vector<Eigen::VectorXd> means;
  std::vector<double> vars, weights;
  for (size_t k = 0; k < comps.size(); ++k) {
    const std::string base = field + ".components[" + std::to_string(k) + "]";
    const json& c = comps[k];
    if (!c.is_object() || !c.contains("mean") || !c.contains("variance")) {
      bad_field(base, "expected {mean, variance[, weight]}");
    }
    means.push_back(want_vector(c["mean"], base + ".mean"));
    vars.push_back(want_number(c["variance"], base + ".variance"));
    weights.push_back(c.contains("weight") ? want_number(c["weight"], base + ".weight") : 1.0);
  }
  return GaussianMixturePrior(std::move(means), std::move(vars), std::move(weights));
}

Sampler sampler_from_string(const std::string& s, const std::string& field) {
  if (s == "bon") return Sampler::bon;
  if (s == "code") return Sampler::code;
  if (s == "grad_only") return Sampler::grad_only;
  if (s == "unicode") return Sampler::unicode;
  bad_field(field, "unknown sampler '" + s + "' (bon, code, grad_only, unicode)");
}

SelectionRule selection_from_string(const std::string& s, const std::string& field) {
  if (s == "greedy") return SelectionRule::greedy;
  if (s == "multinomial") return SelectionRule::multinomial;
  bad_field(field, "unknown selection rule '" + s + "' (greedy, multinomial)");
}

GradMode grad_mode_from_string(const std::string& s, const std::string& field) {
  if (s == "analytic") return GradMode::analytic;
  if (s == "zero_order") return GradMode::zero_order;
  bad_field(field, "unknown grad mode '" + s + "' (analytic, zero_order)");
}

RescaleMode rescale_mode_from_string(const std::string& s, const std::string& field) {
  if (s == "fixed") return RescaleMode::fixed;
  if (s == "cfg_rescaled") return RescaleMode::cfg_rescaled;
  bad_field(field, "unknown rescale mode '" + s + "' (fixed, cfg_rescaled)");
}

std::vector<int> want_int_list(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) bad_field(field, "expected a non-empty integer array");
  std::vector<int> out;
  for (const auto& e : j) out.push_back(want_int(e, field));
  return out;
}

// Applies one guidance-spec field (also used for sweep overrides, hence the
// alias names matching the CSV columns).
bool apply_guidance_field(GuidanceConfig& g, const std::string& key, const json& v) {
  if (key == "sampler" || key == "method") {
    g.sampler = sampler_from_string(want_string(v, key), key);
  } else if (key == "selection") {
    g.selection = selection_from_string(want_string(v, key), key);
  } else if (key == "grad_mode") {
    g.grad_mode = grad_mode_from_string(want_string(v, key), key);
  } else if (key == "rescale_mode") {
    g.rescale_mode = rescale_mode_from_string(want_string(v, key), key);
  } else if (key == "n_particles" || key == "N") {
    g.n_particles = want_int(v, key);
  } else if (key == "block_sample" || key == "B_s") {
    g.block_sample = want_int(v, key);
  } else if (key == "block_grad" || key == "B_g") {
    g.block_grad = want_int(v, key);
  } else if (key == "temperature" || key == "tau") {
    g.temperature = want_number(v, key);
  } else if (key == "guidance_scale" || key == "gamma") {
    g.guidance_scale = want_number(v, key);
  } else if (key == "cluster_k") {
    g.cluster_k = want_int(v, key);
  } else if (key == "grad_repeats") {
    g.grad_repeats = want_int(v, key);
  } else if (key == "grad_window_start") {
    g.grad_window_start = want_number(v, key);
  } else if (key == "grad_window_end") {
    g.grad_window_end = want_number(v, key);
  } else if (key == "particle_schedule") {
    g.particle_schedule = want_int_list(v, key);
  } else if (key == "cfg_scale") {
    g.cfg_scale = want_number(v, key);
  } else if (key == "rescale_eps") {
    g.rescale_eps = want_number(v, key);
  } else if (key == "rescale_max_factor") {
    g.rescale_max_factor = want_number(v, key);
  } else if (key == "zoo.sigma") {
    g.zoo.sigma = want_number(v, key);
  } else if (key == "zoo.n_probes") {
    g.zoo.n_probes = want_int(v, key);
  } else {
    return false;
  }
  return true;
}

// Sweep axes that rewrite the reward spec rather than the guidance config.
bool apply_reward_field(json& reward_spec, const std::string& key, const json& v) {
  if (key == "reward.gammas") {
    if (!v.is_array() || v.size() != 2) bad_field(key, "expected [gamma1, gamma2]");
    if (!reward_spec.is_object() || reward_spec.value("kind", "") != "weighted_sum") {
      bad_field(key, "only applies to a weighted_sum reward");
    }
    reward_spec["gamma1"] = v[0];
    reward_spec["gamma2"] = v[1];
    return true;
  }
  if (key == "reward.step") {
    if (!reward_spec.is_object() || reward_spec.value("kind", "") != "quantized") {
      bad_field(key, "only applies to a quantized reward");
    }
    reward_spec["step"] = v;
    return true;
  }
  return false;
}

void parse_guidance_block(GuidanceConfig& g, const json& block) {
  if (!block.is_object()) bad_field("guidance", "expected an object");
  for (auto it = block.begin(); it != block.end(); ++it) {
    if (it.key() == "zoo") {
      if (!it.value().is_object()) bad_field("guidance.zoo", "expected an object");
      for (auto z = it.value().begin(); z != it.value().end(); ++z) {
        if (!apply_guidance_field(g, "zoo." + z.key(), z.value())) {
          bad_field("guidance.zoo." + z.key(), "unknown field");
        }
      }
    } else if (!apply_guidance_field(g, it.key(), it.value())) {
      bad_field("guidance." + it.key(), "unknown field");
    }
  }
}

}  // namespace

RewardModel reward_from_spec(const json& spec) {
  if (!spec.is_object() || !spec.contains("kind")) {
    bad_field("reward", "expected an object with a 'kind'");
  }
  const std::string kind = want_string(spec["kind"], "reward.kind");
  if (kind == "linear") {
    if (!spec.contains("a")) bad_field("reward.a", "required for linear rewards");
    return linear_reward(want_vector(spec["a"], "reward.a"));
  }
  if (kind == "target") {
    if (!spec.contains("target")) bad_field("reward.target", "required for target rewards");
    const double scale = spec.contains("scale") ? want_number(spec["scale"], "reward.scale") : 1.0;
    return target_reward(want_vector(spec["target"], "reward.target"), scale);
  }
  if (kind == "quantized") {
    if (!spec.contains("base")) bad_field("reward.base", "required for quantized rewards");
    const double step = spec.contains("step") ? want_number(spec["step"], "reward.step") : 0.5;
    return quantized_reward(reward_from_spec(spec["base"]), step);
  }
  if (kind == "weighted_sum") {
    if (!spec.contains("r1") || !spec.contains("r2")) {
      bad_field("reward", "weighted_sum needs 'r1' and 'r2'");
    }
    const double g1 = spec.contains("gamma1") ? want_number(spec["gamma1"], "reward.gamma1") : 1.0;
    const double g2 = spec.contains("gamma2") ? want_number(spec["gamma2"], "reward.gamma2") : 1.0;
    return weighted_sum_reward(g1, reward_from_spec(spec["r1"]), g2,
                               reward_from_spec(spec["r2"]));
  }
  bad_field("reward.kind", "unknown kind '" + kind +
                               "' (linear, target, quantized, weighted_sum)");
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  ExperimentConfig cfg;

  if (!j.contains("prior")) bad_field("prior", "required");
  cfg.prior = prior_from_spec(j["prior"], "prior");
  if (j.contains("conditional_prior")) {
    cfg.conditional_prior = prior_from_spec(j["conditional_prior"], "conditional_prior");
    if (cfg.conditional_prior->dim() != cfg.prior->dim()) {
      bad_field("conditional_prior", "dimension differs from prior");
    }
  }

  if (!j.contains("reward")) bad_field("reward", "required");
  cfg.reward_spec = j["reward"];
  reward_from_spec(cfg.reward_spec);  // validate eagerly

  if (j.contains("schedule")) {
    const json& s = j["schedule"];
    if (!s.is_object()) bad_field("schedule", "expected an object");
    if (s.contains("T")) cfg.T = want_int(s["T"], "schedule.T");
    if (s.contains("beta_start")) cfg.beta_start = want_number(s["beta_start"], "schedule.beta_start");
    if (s.contains("beta_end")) cfg.beta_end = want_number(s["beta_end"], "schedule.beta_end");
  }
  make_linear_schedule(cfg.T, cfg.beta_start, cfg.beta_end);  // validate eagerly

  if (j.contains("guidance")) parse_guidance_block(cfg.guidance, j["guidance"]);
  cfg.guidance.validate();

  if (j.contains("sweep")) {
    const json& sw = j["sweep"];
    if (!sw.is_object()) bad_field("sweep", "expected an object of field -> value list");
    std::map<std::string, std::vector<json>> axes;  // sorted: canonical cell order
    for (auto it = sw.begin(); it != sw.end(); ++it) {
      if (!it.value().is_array() || it.value().empty()) {
        bad_field("sweep." + it.key(), "expected a non-empty value list");
      }
      // Check the axis is applicable by trying it on scratch copies.
      GuidanceConfig scratch = cfg.guidance;
      json scratch_reward = cfg.reward_spec;
      if (!apply_guidance_field(scratch, it.key(), it.value()[0]) &&
          !apply_reward_field(scratch_reward, it.key(), it.value()[0])) {
        bad_field("sweep." + it.key(), "not a sweepable field");
      }
      axes[it.key()] = std::vector<json>(it.value().begin(), it.value().end());
    }
    for (auto& [k, v] : axes) cfg.sweeps.emplace_back(k, std::move(v));
  }

  if (j.contains("seeds")) {
    const json& s = j["seeds"];
    if (!s.is_array() || s.empty()) bad_field("seeds", "expected a non-empty integer array");
    cfg.seeds.clear();
    for (const auto& e : s) {
      if (!e.is_number_integer() || e.get<std::int64_t>() < 0) {
        bad_field("seeds", "entries must be non-negative integers");
      }
      cfg.seeds.push_back(e.get<std::uint64_t>());
    }
  }
  if (j.contains("replicates")) {
    cfg.replicates = want_int(j["replicates"], "replicates");
    if (cfg.replicates < 1) bad_field("replicates", "must be >= 1");
  }
  if (j.contains("tilt_lambda")) {
    cfg.tilt_lambda = want_number(j["tilt_lambda"], "tilt_lambda");
    if (*cfg.tilt_lambda < 0.0) bad_field("tilt_lambda", "must be >= 0");
  }
  if (j.contains("sdedit")) {
    const json& s = j["sdedit"];
    if (!s.is_object() || !s.contains("reference")) {
      bad_field("sdedit", "expected an object with 'reference' (and optional 'eta')");
    }
    cfg.sdedit_reference = want_vector(s["reference"], "sdedit.reference");
    if (cfg.sdedit_reference->size() != cfg.prior->dim()) {
      bad_field("sdedit.reference", "dimension differs from prior");
    }
    if (s.contains("eta")) cfg.sdedit_eta = want_number(s["eta"], "sdedit.eta");
    if (!(cfg.sdedit_eta > 0.0 && cfg.sdedit_eta < 1.0)) bad_field("sdedit.eta", "must lie in (0, 1)");
  }
  if (j.contains("emit")) {
    const json& em = j["emit"];
    if (!em.is_array()) bad_field("emit", "expected an array of {x, y} objects");
    for (const auto& e : em) {
      if (!e.is_object() || !e.contains("x") || !e.contains("y")) {
        bad_field("emit", "each entry needs 'x' and 'y' field names");
      }
      cfg.emit_series.emplace_back(want_string(e["x"], "emit.x"), want_string(e["y"], "emit.y"));
    }
  }
  if (j.contains("out")) cfg.out_dir = want_string(j["out"], "out");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config parse error in " + path + ": " + e.what());
  }
  return parse_config(j);
}

namespace {

struct Cell {
  GuidanceConfig g;
  json reward_spec;
  std::string key;
};

std::string schedule_to_string(const std::vector<int>& sched) {
  if (sched.empty()) return "-";
  std::string out;
  for (size_t i = 0; i < sched.size(); ++i) {
    if (i) out += ':';
    out += std::to_string(sched[i]);
  }
  return out;
}

std::string cell_key_of(const GuidanceConfig& g) {
  std::string key = to_string(g.sampler);
  key += '|';
  key += std::to_string(g.n_particles);
  key += '|';
  key += std::to_string(g.block_sample);
  key += '|';
  key += std::to_string(g.block_grad);
  key += '|';
  key += format_double(g.temperature);
  key += '|';
  key += format_double(g.guidance_scale);
  key += '|';
  key += schedule_to_string(g.particle_schedule);
  key += '|';
  key += std::to_string(g.cluster_k);
  return key;
}

std::vector<Cell> expand_cells(const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  cells.push_back({cfg.guidance, cfg.reward_spec, ""});
  for (const auto& [axis, values] : cfg.sweeps) {
    std::vector<Cell> next;
    next.reserve(cells.size() * values.size());
    for (const Cell& c : cells) {
      for (const json& v : values) {
        Cell nc = c;
        if (!apply_guidance_field(nc.g, axis, v)) apply_reward_field(nc.reward_spec, axis, v);
        next.push_back(std::move(nc));
      }
    }
    cells = std::move(next);
  }
  for (Cell& c : cells) {
    // Reward parameters are not part of the CSV key columns; fold any
    // reward-axis values into the key so such cells stay distinguishable.
    c.key = cell_key_of(c.g);
    if (c.reward_spec != cfg.reward_spec) c.key += "|" + c.reward_spec.dump();
  }
  return cells;
}

NormalizedValue ratio_against(double value, double baseline) {
  if (baseline == 0.0) {
    if (value == 0.0) return {1.0, true};
    return {value, false};
  }
  return {value / baseline, true};
}

}  // namespace

ResultTable run_grid(const ExperimentConfig& cfg) {
  const GaussianMixturePrior& prior = cfg.prior.value();
  const NoiseSchedule schedule = make_linear_schedule(cfg.T, cfg.beta_start, cfg.beta_end);

  StateVector sdedit_ref;
  RunOptions opts;
  if (cfg.conditional_prior) opts.conditional_prior = &cfg.conditional_prior.value();
  if (cfg.sdedit_reference) {
    sdedit_ref = {*cfg.sdedit_reference, 0};
    opts.sdedit_reference = &sdedit_ref;
    opts.sdedit_eta = cfg.sdedit_eta;
  }

  // Unguided reference trajectories are shared by every cell: one per
  // (seed, replicate), matched to the guided runs through the sub-seed.
  const RewardModel probe_reward = reward_from_spec(cfg.reward_spec);
  std::unordered_map<std::uint64_t, std::vector<Eigen::VectorXd>> baseline_finals;
  std::unordered_map<std::uint64_t, double> baseline_bandwidth;
  for (std::uint64_t seed : cfg.seeds) {
    std::vector<Eigen::VectorXd> finals;
    finals.reserve(cfg.replicates);
    for (int r = 0; r < cfg.replicates; ++r) {
      finals.push_back(
          run_unguided(prior, schedule, probe_reward, replicate_seed(seed, r), opts)
              .final.values);
    }
    // The kernel is fixed from the reference sample alone so every cell of
    // a sweep is measured with the same bandwidth; per-cell bandwidths would
    // make the divergence column incomparable across a sweep.
    baseline_bandwidth[seed] = median_heuristic_bandwidth(finals, finals);
    baseline_finals[seed] = std::move(finals);
  }

  ResultTable table;
  for (const Cell& cell : expand_cells(cfg)) {
    RewardModel reward;
    try {
      reward = reward_from_spec(cell.reward_spec);
    } catch (const std::exception& e) {
      table.failures.push_back(cell.key + ": " + e.what());
      continue;
    }
    for (std::uint64_t seed : cfg.seeds) {
      try {
        std::vector<Eigen::VectorXd> finals;
        std::vector<double> final_rewards;
        finals.reserve(cfg.replicates);
        NfeCounters nfe;
        double wall = 0.0;
        for (int r = 0; r < cfg.replicates; ++r) {
          const std::uint64_t sub = replicate_seed(seed, r);
          RunResult res;
          switch (cell.g.sampler) {
            case Sampler::bon: res = run_bon(cell.g, prior, reward, schedule, sub, opts); break;
            case Sampler::code: res = run_code(cell.g, prior, reward, schedule, sub, opts); break;
            case Sampler::grad_only:
              res = run_gradient_only(cell.g, prior, reward, schedule, sub, opts);
              break;
            case Sampler::unicode:
              res = run_unicode(cell.g, prior, reward, schedule, sub, opts);
              break;
          }
          finals.push_back(res.final.values);
          final_rewards.push_back(res.final_reward);
          if (r == 0) nfe = res.metrics.nfe;
          wall += res.metrics.wall_ms;
        }

        const std::vector<Eigen::VectorXd>& base = baseline_finals.at(seed);
        double base_reward = 0.0;
        for (const auto& b : base) base_reward += reward.evaluate(b);
        base_reward /= static_cast<double>(base.size());

        RunRow row;
        row.method = to_string(cell.g.sampler);
        row.N = cell.g.n_particles;
        row.B_s = cell.g.block_sample;
        row.B_g = cell.g.block_grad;
        row.tau = cell.g.temperature;
        row.gamma = cell.g.guidance_scale;
        row.schedule_str = schedule_to_string(cell.g.particle_schedule);
        row.cluster_k = cell.g.cluster_k;
        row.seed = seed;
        row.cell_key = cell.key;
        double mean = 0.0;
        for (double v : final_rewards) mean += v;
        mean /= static_cast<double>(final_rewards.size());
        row.reward_mean = mean;
        row.reward_norm = ratio_against(mean, base_reward);
        row.mmd2 = mmd2_rbf(finals, base, baseline_bandwidth.at(seed));
        if (cfg.tilt_lambda && prior.components() == 1 &&
            cell.reward_spec.value("kind", "") == "linear") {
          const TiltedGaussian tilt = tilted_oracle(
              prior, want_vector(cell.reward_spec["a"], "reward.a"), *cfg.tilt_lambda);
          Eigen::VectorXd m = Eigen::VectorXd::Zero(prior.dim());
          for (const auto& f : finals) m += f;
          m /= static_cast<double>(finals.size());
          row.tilt_mean_error = (m - tilt.mean).norm();
        }
        row.nfe_denoiser = nfe.denoiser_calls;
        row.nfe_reward = nfe.reward_evals;
        row.nfe_grad = nfe.gradient_evals;
        row.wall_ms = wall;
        table.rows.push_back(std::move(row));
      } catch (const std::exception& e) {
        table.failures.push_back(cell.key + " seed " + std::to_string(seed) + ": " + e.what());
      }
    }
  }

  std::sort(table.rows.begin(), table.rows.end(), [](const RunRow& a, const RunRow& b) {
    if (a.cell_key != b.cell_key) return a.cell_key < b.cell_key;
    return a.seed < b.seed;
  });
  return table;
}

void write_csv(const ResultTable& table, const std::string& path, bool include_timing) {
  if (table.rows.empty()) throw std::invalid_argument("write_csv: empty table");
  std::ofstream out(path, std::ios::binary);  // binary: no newline translation anywhere
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << "method,N,B_s,B_g,tau,gamma,schedule,cluster_k,seed,reward_mean,reward_norm,"
         "mmd2,tilt_mean_error,nfe_denoiser,nfe_reward,nfe_grad,wall_ms\n";
  for (const RunRow& r : table.rows) {
    out << r.method << ',' << r.N << ',' << r.B_s << ',' << r.B_g << ','
        << format_double(r.tau) << ',' << format_double(r.gamma) << ',' << r.schedule_str
        << ',' << r.cluster_k << ',' << r.seed << ',' << format_double(r.reward_mean) << ','
        << format_double(r.reward_norm.value) << (r.reward_norm.normalized ? "" : "*") << ','
        << format_double(r.mmd2) << ','
        << (r.tilt_mean_error ? format_double(*r.tilt_mean_error) : std::string("-")) << ','
        << r.nfe_denoiser << ',' << r.nfe_reward << ',' << r.nfe_grad << ','
        << (include_timing ? format_double(r.wall_ms) : std::string("0")) << '\n';
  }
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

namespace {

double field_value(const RunRow& r, const std::string& field) {
  if (field == "N") return r.N;
  if (field == "B_s") return r.B_s;
  if (field == "B_g") return r.B_g;
  if (field == "tau") return r.tau;
  if (field == "gamma") return r.gamma;
  if (field == "cluster_k") return r.cluster_k;
  if (field == "seed") return static_cast<double>(r.seed);
  if (field == "reward_mean") return r.reward_mean;
  if (field == "reward_norm") return r.reward_norm.value;
  if (field == "mmd2") return r.mmd2;
  if (field == "tilt_mean_error") {
    return r.tilt_mean_error ? *r.tilt_mean_error : std::numeric_limits<double>::quiet_NaN();
  }
  if (field == "nfe_denoiser") return static_cast<double>(r.nfe_denoiser);
  if (field == "nfe_reward") return static_cast<double>(r.nfe_reward);
  if (field == "nfe_grad") return static_cast<double>(r.nfe_grad);
  if (field == "wall_ms") return r.wall_ms;
  throw std::invalid_argument("emit_tradeoff_data: unknown field '" + field + "'");
}

}  // namespace

void emit_tradeoff_data(const ResultTable& table, const std::string& x_field,
                        const std::string& y_field, const std::string& path_prefix) {
  if (table.rows.empty()) throw std::invalid_argument("emit_tradeoff_data: empty table");
  // Per method: average y over all rows sharing one x value, then order
  // points by x. Averaging across the other sweep axes keeps the series
  // single-valued in x.
  std::map<std::string, std::map<double, std::pair<double, int>>> series;
  for (const RunRow& r : table.rows) {
    const double x = field_value(r, x_field);
    const double y = field_value(r, y_field);
    if (std::isnan(x) || std::isnan(y)) continue;
    auto& acc = series[r.method][x];
    acc.first += y;
    acc.second += 1;
  }
  for (const auto& [method, points] : series) {
    const std::string path = path_prefix + method + ".dat";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_tradeoff_data: cannot open " + path);
    for (const auto& [x, acc] : points) {
      out << format_double(x) << ' ' << format_double(acc.first / acc.second) << '\n';
    }
  }
}

namespace {

json base_demo(int T) {
  return json{
      {"prior", {{"components", json::array({{{"mean", {0.0}}, {"variance", 1.0}, {"weight", 1.0}}})}}},
      {"reward", {{"kind", "linear"}, {"a", {1.0}}}},
      {"schedule", {{"T", T}, {"beta_start", 1e-4}, {"beta_end", 0.02}}},
      {"seeds", {2024}},
  };
}

}  // namespace

std::vector<std::string> demo_names() {
  return {"baseline", "trend",      "tradeoff",    "blocksize",
          "clustering", "zoo",       "multireward", "sdedit"};
}

json demo_config(const std::string& name) {
  if (name == "baseline") {
    // The unguided reference point: best-of-1 is the plain sampler, so the
    // normalized row must come out at exactly 1.
    json j = base_demo(100);
    j["guidance"] = {{"sampler", "bon"}, {"n_particles", 1}};
    j["replicates"] = 16;
    j["tilt_lambda"] = 1.0;
    j["out"] = "demo_baseline";
    return j;
  }
  if (name == "trend") {
    // Reward ordering of the sampler family at the reference operating
    // point: selection beats best-of-n, gradients on top beat selection.
    json j = base_demo(100);
    j["guidance"] = {{"sampler", "unicode"}, {"n_particles", 4}, {"block_sample", 5},
                     {"block_grad", 5},      {"gamma", 0.2}};
    j["sweep"] = {{"sampler", {"bon", "code", "unicode"}}};
    j["replicates"] = 50;
    j["out"] = "demo_trend";
    return j;
  }
  if (name == "tradeoff") {
    // The reward/divergence frontier: push harder (gamma) or search wider
    // (N) and reward rises while the output drifts from the prior.
    json j = base_demo(100);
    // Sparse selection (B_s = 25) keeps gamma the dominant axis; with dense
    // selection the divergence saturates for every gamma and the frontier
    // flattens out.
    j["guidance"] = {{"sampler", "unicode"}, {"block_sample", 25}, {"block_grad", 5}};
    j["sweep"] = {{"gamma", {0.0, 0.1, 0.2, 0.4}}, {"N", {1, 4, 16}}};
    j["replicates"] = 64;
    j["emit"] = json::array({{{"x", "gamma"}, {"y", "reward_mean"}},
                             {{"x", "gamma"}, {"y", "mmd2"}},
                             {{"x", "N"}, {"y", "reward_mean"}}});
    j["out"] = "demo_tradeoff";
    return j;
  }
  if (name == "blocksize") {
    // More frequent selection (smaller B_s) concentrates the particle set
    // on high-reward regions sooner.
    json j = base_demo(100);
    j["guidance"] = {{"sampler", "code"}, {"n_particles", 4}};
    j["sweep"] = {{"B_s", {2, 5, 10}}};
    j["replicates"] = 64;
    j["emit"] = json::array({{{"x", "B_s"}, {"y", "reward_mean"}}});
    j["out"] = "demo_blocksize";
    return j;
  }
  if (name == "clustering") {
    // Sharing one gradient per cluster: a quarter the gradient cost on a
    // bimodal prior, with reward close to the per-particle run.
    json j = base_demo(100);
    j["prior"] = {{"components",
                   json::array({{{"mean", {-1.5}}, {"variance", 0.25}, {"weight", 1.0}},
                                {{"mean", {1.5}}, {"variance", 0.25}, {"weight", 1.0}}})}};
    j["guidance"] = {{"sampler", "unicode"}, {"n_particles", 4}, {"gamma", 0.2}};
    j["sweep"] = {{"cluster_k", {0, 2}}};
    j["replicates"] = 50;
    j["out"] = "demo_clustering";
    return j;
  }
  if (name == "zoo") {
    // Zero-order guidance on a reward with no gradient anywhere: quality as
    // a function of the probe budget. The task is 16-dimensional on
    // purpose: with a handful of probes the estimate barely aligns with the
    // true direction, which is exactly what makes few-probe guidance weak.
    json j = base_demo(100);
    const std::vector<double> zeros(16, 0.0);
    const std::vector<double> target(16, 0.5);
    j["prior"] = {{"components",
                   json::array({{{"mean", zeros}, {"variance", 1.0}, {"weight", 1.0}}})}};
    j["reward"] = {{"kind", "quantized"},
                   {"base", {{"kind", "target"}, {"target", target}, {"scale", 1.0}}},
                   {"step", 0.5}};
    j["guidance"] = {{"sampler", "unicode"}, {"n_particles", 4}, {"gamma", 0.2},
                     {"grad_mode", "zero_order"}};
    j["sweep"] = {{"zoo.n_probes", {1, 5, 10, 50}}};
    j["replicates"] = 30;
    j["emit"] = json::array({{{"x", "nfe_grad"}, {"y", "reward_mean"}}});
    j["out"] = "demo_zoo";
    return j;
  }
  if (name == "multireward") {
    // Two rewards, switched by their weights: alignment-to-direction
    // versus closeness-to-point.
    json j = base_demo(100);
    j["reward"] = {{"kind", "weighted_sum"},
                   {"gamma1", 1.0},
                   {"r1", {{"kind", "linear"}, {"a", {1.0}}}},
                   {"gamma2", 0.0},
                   {"r2", {{"kind", "target"}, {"target", {1.5}}, {"scale", 1.0}}}};
    j["guidance"] = {{"sampler", "unicode"}, {"n_particles", 4}, {"gamma", 0.2}};
    j["sweep"] = {{"reward.gammas", {json::array({1.0, 0.0}), json::array({0.0, 1.0})}}};
    j["replicates"] = 40;
    j["out"] = "demo_multireward";
    return j;
  }
  if (name == "sdedit") {
    // Edit-style runs: start from a partially noised reference instead of
    // pure noise, then steer toward the reward.
    json j = base_demo(100);
    j["guidance"] = {{"sampler", "unicode"}, {"n_particles", 4}, {"gamma", 0.2}};
    j["sweep"] = {{"sampler", {"bon", "unicode"}}};
    j["sdedit"] = {{"eta", 0.6}, {"reference", {1.0}}};
    j["replicates"] = 40;
    j["out"] = "demo_sdedit";
    return j;
  }
  std::string names;
  for (const auto& n : demo_names()) names += (names.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown demo '" + name + "' (available: " + names + ")");
}

}  // namespace guidelab
