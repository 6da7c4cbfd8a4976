#include "guidelab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace guidelab {

std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t substream_key(std::uint64_t seed, RngPhase phase,
                            std::uint64_t particle, std::uint64_t step) noexcept {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ mix64(static_cast<std::uint64_t>(phase)));
  h = mix64(h ^ mix64(particle));
  h = mix64(h ^ mix64(step));
  return h;
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  // u1 in (0, 1] so the log is finite.
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Eigen::VectorXd RngStream::normal_vector(Eigen::Index d) {
  Eigen::VectorXd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = normal();
  return v;
}

std::size_t RngStream::categorical(const Eigen::VectorXd& probs) {
  if (probs.size() == 0) throw std::invalid_argument("categorical: empty probability vector");
  const double u = uniform();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<std::size_t>(i);
  }
  return static_cast<std::size_t>(probs.size() - 1);
}

}  // namespace guidelab
