#pragma once

#include <cstdint>

namespace guidelab {

// Hardware-independent compute cost of a run. denoiser_calls counts score
// evaluations used for reverse steps, reward_evals counts calls into a
// reward model's evaluate (selection scoring and zero-order probes alike),
// gradient_evals counts gradient estimates: 1 per analytic estimate, 2*N'
// per zero-order estimate (one per probe evaluation).
struct NfeCounters {
  std::int64_t denoiser_calls = 0;
  std::int64_t reward_evals = 0;
  std::int64_t gradient_evals = 0;

  NfeCounters& operator+=(const NfeCounters& o) {
    denoiser_calls += o.denoiser_calls;
    reward_evals += o.reward_evals;
    gradient_evals += o.gradient_evals;
    return *this;
  }
};

}  // namespace guidelab
