#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "netdesign/design.hpp"
#include "netdesign/network.hpp"
#include "netdesign/rng.hpp"

namespace netdesign {

namespace {

// Lloyd iterations with k-means++ seeding. Ties go to the lowest index, so
// the result is a pure function of (points, rng state).
struct KmeansResult {
  std::vector<int> labels;
  double inertia;
};

KmeansResult kmeans_once(const Eigen::MatrixXd& points, int k, Rng& rng) {
  const int n = static_cast<int>(points.rows());
  Eigen::MatrixXd centers(k, points.cols());

  // k-means++ seeding.
  std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
  centers.row(0) = points.row(rng.uniform_below(n));
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = (points.row(i) - centers.row(c - 1)).squaredNorm();
      dist2[i] = std::min(dist2[i], d);
      total += dist2[i];
    }
    int chosen = 0;
    if (total > 0.0) {
      const double threshold = rng.uniform() * total;
      double acc = 0.0;
      chosen = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += dist2[i];
        if (acc >= threshold) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = static_cast<int>(rng.uniform_below(n));
    }
    centers.row(c) = points.row(chosen);
  }

  std::vector<int> labels(n, 0);
  std::vector<int> counts(k, 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    std::fill(counts.begin(), counts.end(), 0);
    std::vector<double> point_dist2(n);
    for (int i = 0; i < n; ++i) {
      int arg = 0;
      double best = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (points.row(i) - centers.row(c)).squaredNorm();
        if (d < best) {
          best = d;
          arg = c;
        }
      }
      point_dist2[i] = best;
      if (labels[i] != arg) {
        labels[i] = arg;
        changed = true;
      }
      counts[arg]++;
    }
    // Re-seed empty clusters with the worst-fitted point.
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      int worst = 0;
      double worst_d = -1.0;
      for (int i = 0; i < n; ++i) {
        if (counts[labels[i]] > 1 && point_dist2[i] > worst_d) {
          worst_d = point_dist2[i];
          worst = i;
        }
      }
      counts[labels[worst]]--;
      labels[worst] = c;
      counts[c] = 1;
      point_dist2[worst] = 0.0;
      changed = true;
    }
    centers.setZero();
    for (int i = 0; i < n; ++i) centers.row(labels[i]) += points.row(i);
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) centers.row(c) /= counts[c];
    }
    if (!changed && iter > 0) break;
  }

  double inertia = 0.0;
  for (int i = 0; i < n; ++i) {
    inertia += (points.row(i) - centers.row(labels[i])).squaredNorm();
  }
  return {std::move(labels), inertia};
}

std::vector<int> kmeans(const Eigen::MatrixXd& points, int k, Rng& rng,
                        int restarts) {
  KmeansResult best{{}, std::numeric_limits<double>::infinity()};
  for (int r = 0; r < restarts; ++r) {
    KmeansResult res = kmeans_once(points, k, rng);
    if (res.inertia < best.inertia) best = std::move(res);
  }
  return best.labels;
}

}  // namespace

std::vector<int> spectral_clusters(const Network& net, int k_clusters, Rng& rng) {
  const int n = net.node_count();
  if (k_clusters < 2 || k_clusters > n / 2) {
    throw std::invalid_argument(
        "spectral_clusters: k_clusters must lie in [2, n/2]");
  }
  // Symmetric normalized Laplacian; isolated nodes get a zero scaling so they
  // land at the embedding origin.
  Eigen::VectorXd dinv_sqrt(n);
  for (int i = 0; i < n; ++i) {
    const int d = net.degree(i);
    dinv_sqrt(i) = d > 0 ? 1.0 / std::sqrt(static_cast<double>(d)) : 0.0;
  }
  Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(n, n);
  for (const auto& [i, j] : net.edges()) {
    const double v = dinv_sqrt(i) * dinv_sqrt(j);
    lap(i, j) -= v;
    lap(j, i) -= v;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectral_clusters: eigendecomposition failed");
  }
  // Columns are sorted by ascending eigenvalue; the k smallest span the
  // embedding.
  const Eigen::MatrixXd embedding = solver.eigenvectors().leftCols(k_clusters);
  return kmeans(embedding, k_clusters, rng, 10);
}

}  // namespace netdesign
