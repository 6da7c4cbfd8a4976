#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace guidelab {

// A single sampler state: the vector being denoised plus the timestep it
// currently sits at. t counts down from T (pure noise) to 0 (clean sample).
struct StateVector {
  Eigen::VectorXd values;
  int t = 0;
};

// A population of states evolving in lockstep. substream_ids[i] is the RNG
// slot owned by particle i; slots are stable across selection steps so that
// two runs with the same seed and the same slot occupancy draw identical
// noise regardless of how particles were shuffled into the slots.
struct ParticleSet {
  std::vector<StateVector> particles;
  std::vector<std::uint64_t> substream_ids;

  int size() const { return static_cast<int>(particles.size()); }
};

}  // namespace guidelab
