#include "guidelab/kmeans.hpp"

#include <limits>
#include <stdexcept>

namespace guidelab {

namespace {

int nearest_centroid(const Eigen::VectorXd& p, const std::vector<Eigen::VectorXd>& centroids) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < static_cast<int>(centroids.size()); ++c) {
    const double d = (p - centroids[c]).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::vector<Eigen::VectorXd> seed_plus_plus(const std::vector<Eigen::VectorXd>& points,
                                            int K, RngStream& rng) {
  const int n = static_cast<int>(points.size());
  std::vector<Eigen::VectorXd> centroids;
  centroids.reserve(K);
  centroids.push_back(points[static_cast<int>(rng.uniform() * n) % n]);
  Eigen::VectorXd d2(n);
  while (static_cast<int>(centroids.size()) < K) {
    for (int i = 0; i < n; ++i) {
      d2[i] = std::numeric_limits<double>::infinity();
      for (const auto& c : centroids) {
        d2[i] = std::min(d2[i], (points[i] - c).squaredNorm());
      }
    }
    const double total = d2.sum();
    if (total <= 0.0) {
      // All points coincide with existing centroids; any pick works.
      centroids.push_back(points[static_cast<int>(rng.uniform() * n) % n]);
      continue;
    }
    centroids.push_back(points[rng.categorical(d2 / total)]);
  }
  return centroids;
}

}  // namespace

KmeansResult kmeans_cluster(const std::vector<Eigen::VectorXd>& points, int K,
                            int iters, RngStream& rng) {
  if (points.empty()) throw std::invalid_argument("kmeans_cluster: no points");
  if (K < 1) throw std::invalid_argument("kmeans_cluster: K must be >= 1");
  const int n = static_cast<int>(points.size());
  if (K >= n) {
    KmeansResult res;
    res.assignments.resize(n);
    res.centroids = points;
    for (int i = 0; i < n; ++i) res.assignments[i] = i;
    return res;
  }

  KmeansResult res;
  res.centroids = seed_plus_plus(points, K, rng);
  res.assignments.assign(n, -1);

  for (int round = 0; round < iters; ++round) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      const int c = nearest_centroid(points[i], res.centroids);
      if (c != res.assignments[i]) {
        res.assignments[i] = c;
        changed = true;
      }
    }
    if (!changed && round > 0) break;

    std::vector<int> counts(K, 0);
    std::vector<Eigen::VectorXd> sums(K, Eigen::VectorXd::Zero(points[0].size()));
    for (int i = 0; i < n; ++i) {
      counts[res.assignments[i]] += 1;
      sums[res.assignments[i]] += points[i];
    }
    for (int c = 0; c < K; ++c) {
      if (counts[c] > 0) {
        res.centroids[c] = sums[c] / counts[c];
      } else {
        // Re-seed a starved cluster at the point worst served by its
        // current assignment.
        int far_i = 0;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          const double d = (points[i] - res.centroids[res.assignments[i]]).squaredNorm();
          if (d > far_d) {
            far_d = d;
            far_i = i;
          }
        }
        res.centroids[c] = points[far_i];
      }
    }
  }

  // Assignments must describe the returned centroids.
  for (int i = 0; i < n; ++i) res.assignments[i] = nearest_centroid(points[i], res.centroids);
  return res;
}

}  // namespace guidelab
