#include "blocksdp/linalg.hpp"

#include <cmath>
#include <limits>

namespace blocksdp {

namespace {

void check_square(const Matrix& s, const char* who) {
  if (s.rows() != s.cols() || s.rows() < 1)
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  if (!s.allFinite())
    throw std::invalid_argument(std::string(who) + ": matrix must be finite");
}

}  // namespace

EigenDecomposition sym_eig(const Matrix& s) {
  check_square(s, "sym_eig");
  // Symmetrize so tiny asymmetries from accumulated arithmetic are harmless.
  Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("sym_eig: eigensolver failed to converge");
  const int n = static_cast<int>(s.rows());
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // Eigen returns ascending order; flip to descending.
  for (int i = 0; i < n; ++i) {
    out.values[i] = es.eigenvalues()[n - 1 - i];
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

Matrix psd_project(const Matrix& s) {
  check_square(s, "psd_project");
  Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("psd_project: eigensolver failed to converge");
  Vector clipped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
}

double spectral_norm(const Matrix& s) {
  check_square(s, "spectral_norm");
  Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spectral_norm: eigensolver failed to converge");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

double squared_dist(const Matrix& points, int i, const Matrix& centroids, int k) {
  return (points.row(i) - centroids.row(k)).squaredNorm();
}

// k-means++ seeding.
Matrix seed_centroids(const Matrix& points, int K, Rng& rng) {
  const int n = static_cast<int>(points.rows());
  Matrix centroids(K, points.cols());
  centroids.row(0) = points.row(rng.uniform_int(n));
  Vector d2(n);
  for (int i = 0; i < n; ++i) d2[i] = (points.row(i) - centroids.row(0)).squaredNorm();
  for (int k = 1; k < K; ++k) {
    double total = d2.sum();
    int pick;
    if (total <= 0.0) {
      pick = rng.uniform_int(n);
    } else {
      double target = rng.uniform() * total, acc = 0.0;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    }
    centroids.row(k) = points.row(pick);
    for (int i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], (points.row(i) - centroids.row(k)).squaredNorm());
  }
  return centroids;
}

struct LloydOutcome {
  std::vector<int> assign;
  Matrix centroids;
  double wcss;
};

LloydOutcome lloyd(const Matrix& points, int K, Rng& rng, const KmeansOptions& opts) {
  const int n = static_cast<int>(points.rows());
  Matrix centroids = seed_centroids(points, K, rng);
  std::vector<int> assign(n, 0);
  double prev_wcss = std::numeric_limits<double>::infinity();
  double wcss = prev_wcss;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    wcss = 0.0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = squared_dist(points, i, centroids, 0);
      for (int k = 1; k < K; ++k) {
        double d = squared_dist(points, i, centroids, k);
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      assign[i] = best;
      wcss += best_d;
    }
    if (wcss > prev_wcss * (1.0 + 1e-12) + 1e-12)
      throw std::logic_error("kmeans: objective increased during Lloyd iteration");
    // Recompute centroids; re-seed any empty cluster at the point farthest
    // from its current centroid.
    Matrix sums = Matrix::Zero(K, points.cols());
    std::vector<int> counts(K, 0);
    for (int i = 0; i < n; ++i) {
      sums.row(assign[i]) += points.row(i);
      ++counts[assign[i]];
    }
    for (int k = 0; k < K; ++k) {
      if (counts[k] > 0) {
        centroids.row(k) = sums.row(k) / counts[k];
      } else {
        int far = 0;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          double d = squared_dist(points, i, centroids, assign[i]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        centroids.row(k) = points.row(far);
      }
    }
    if (prev_wcss - wcss <= opts.rel_tol * std::max(prev_wcss, 1e-300) && iter > 0)
      break;
    prev_wcss = wcss;
  }
  // Final assignment against the last centroids so labels and wcss agree.
  wcss = 0.0;
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double best_d = squared_dist(points, i, centroids, 0);
    for (int k = 1; k < K; ++k) {
      double d = squared_dist(points, i, centroids, k);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    assign[i] = best;
    wcss += best_d;
  }
  return {assign, centroids, wcss};
}

}  // namespace

KmeansResult kmeans(const Matrix& points, int K, std::uint64_t seed,
                    const KmeansOptions& opts) {
  const int n = static_cast<int>(points.rows());
  if (n < 1) throw std::invalid_argument("kmeans: no points");
  if (K < 1 || K > n) throw std::invalid_argument("kmeans: need 1 <= K <= n");
  if (!points.allFinite()) throw std::invalid_argument("kmeans: points must be finite");
  if (opts.restarts < 1) throw std::invalid_argument("kmeans: restarts >= 1");

  LloydOutcome best;
  best.wcss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < opts.restarts; ++r) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(r));
    LloydOutcome run = lloyd(points, K, rng, opts);
    if (run.wcss < best.wcss) best = run;
  }

  KmeansResult out;
  out.labels.K = K;
  out.labels.values.resize(n);
  for (int i = 0; i < n; ++i) out.labels.values[i] = best.assign[i] + 1;
  out.centroids = best.centroids;
  out.wcss = best.wcss;
  return out;
}

}  // namespace blocksdp
