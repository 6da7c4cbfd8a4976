#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace guidelab {

/// Phase tags keep the random streams of different consumers disjoint even
/// when they share the same (seed, particle, step) triple.
enum class RngPhase : std::uint64_t {
  init = 1,     // initial noise / reference noising
  reverse = 2,  // per-step reverse-transition noise
  select = 3,   // multinomial selection draws
  zoo = 4,      // zero-order probe directions
  cluster = 5,  // k-means seeding
  scratch = 6,  // tests and ad-hoc sampling
};

/// splitmix64 finalizer; the key-mixing primitive for substream derivation.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Derives one 64-bit stream key from (seed, phase, particle, step).
std::uint64_t substream_key(std::uint64_t seed, RngPhase phase,
                            std::uint64_t particle, std::uint64_t step) noexcept;

/// Keyed counter-free random substream.
///
/// Every consumer names the stream it wants instead of sharing a mutable
/// generator, so results are independent of evaluation order and thread
/// count. Draw routines are written out explicitly (Box-Muller, inverse-CDF)
/// because the std:: distributions are implementation-defined and would break
/// the bit-reproducibility contract.
class RngStream {
 public:
  RngStream(std::uint64_t seed, RngPhase phase, std::uint64_t particle = 0,
            std::uint64_t step = 0)
      : engine_(substream_key(seed, phase, particle, step)) {}

  /// Uniform double in [0, 1).
  double uniform();

  /// Standard normal via Box-Muller (one value per two uniforms).
  double normal();

  Eigen::VectorXd normal_vector(Eigen::Index d);

  /// Index draw from a probability vector by inverse-CDF walk.
  std::size_t categorical(const Eigen::VectorXd& probs);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace guidelab
