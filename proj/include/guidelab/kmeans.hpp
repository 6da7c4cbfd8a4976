#pragma once

#include <Eigen/Dense>
#include <vector>

#include "guidelab/rng.hpp"

namespace guidelab {

struct KmeansResult {
  std::vector<int> assignments;          // one cluster index per input point
  std::vector<Eigen::VectorXd> centroids;
};

// Lloyd's algorithm with k-means++ seeding drawn from rng. Runs at most
// `iters` update rounds, stopping early once assignments are stable. Empty
// clusters are re-seeded to the point farthest from its current centroid.
// When K exceeds the number of points every point becomes its own cluster
// and the surplus clusters are dropped.
KmeansResult kmeans_cluster(const std::vector<Eigen::VectorXd>& points, int K,
                            int iters, RngStream& rng);

}  // namespace guidelab
