#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the code paths it is used to check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <utility>
#include <vector>

#include "deepmp/core.hpp"
#include "deepmp/rng.hpp"

namespace oracle {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

inline double dot_loop(const MatrixXd& m, Index i, Index j) {
  double s = 0.0;
  for (Index r = 0; r < m.rows(); ++r) s += m(r, i) * m(r, j);
  return s;
}

/// |<a_i, a_j>| / (||a_i|| ||a_j||) with explicit loops.
inline double pair_coherence(const MatrixXd& m, Index i, Index j) {
  return std::abs(dot_loop(m, i, j)) / std::sqrt(dot_loop(m, i, i) * dot_loop(m, j, j));
}

inline double brute_coherence(const MatrixXd& m) {
  double best = 0.0;
  for (Index i = 0; i < m.cols(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (i != j) best = std::max(best, std::min(1.0, pair_coherence(m, i, j)));
  return best;
}

inline double brute_ecdf(const MatrixXd& m, double t) {
  Index count = 0;
  Index pairs = 0;
  for (Index i = 0; i < m.cols(); ++i) {
    for (Index j = i + 1; j < m.cols(); ++j) {
      ++pairs;
      if (std::min(1.0, pair_coherence(m, i, j)) <= t) ++count;
    }
  }
  return static_cast<double>(count) / static_cast<double>(pairs);
}

/// |s_a ∩ s_g| / k by set enumeration.
inline double brute_hamming(const std::vector<Index>& acquired, const std::vector<Index>& truth,
                            int k) {
  std::set<Index> a(acquired.begin(), acquired.end());
  int hits = 0;
  for (Index g : std::set<Index>(truth.begin(), truth.end())) hits += a.count(g) ? 1 : 0;
  return static_cast<double>(hits) / k;
}

/// Projected gradient descent for min ||Ax - b||^2, x >= 0, run to a fixed point.
inline VectorXd projected_gradient_nnls(const MatrixXd& a, const VectorXd& b,
                                        int max_iter = 2000000) {
  const MatrixXd gram = a.transpose() * a;
  const VectorXd atb = a.transpose() * b;
  const double lipschitz = Eigen::SelfAdjointEigenSolver<MatrixXd>(gram).eigenvalues().maxCoeff();
  VectorXd x = VectorXd::Zero(a.cols());
  for (int it = 0; it < max_iter; ++it) {
    const VectorXd next = (x - (gram * x - atb) / lipschitz).cwiseMax(0.0);
    const double step = (next - x).norm();
    x = next;
    if (step < 1e-15) break;
  }
  return x;
}

/// Unconstrained least squares on two columns from the 2x2 normal equations.
inline std::pair<double, double> two_column_ls(const VectorXd& u, const VectorXd& v,
                                               const VectorXd& b) {
  const double uu = u.dot(u), uv = u.dot(v), vv = v.dot(v);
  const double ub = u.dot(b), vb = v.dot(b);
  const double det = uu * vv - uv * uv;
  return {(vv * ub - uv * vb) / det, (uu * vb - uv * ub) / det};
}

/// Central differences of f with respect to every entry of m.
inline MatrixXd finite_difference(MatrixXd m, const std::function<double(const MatrixXd&)>& f,
                                  double h) {
  MatrixXd grad(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const double saved = m(i, j);
      m(i, j) = saved + h;
      const double up = f(m);
      m(i, j) = saved - h;
      const double down = f(m);
      m(i, j) = saved;
      grad(i, j) = (up - down) / (2.0 * h);
    }
  }
  return grad;
}

/// AdaBound on one scalar, written out term by term.
struct ScalarAdaBound {
  double lr = 1e-3, final_lr = 0.1, beta1 = 0.9, beta2 = 0.999, gamma = 1e-3, eps = 1e-8;
  double m = 0.0, v = 0.0;
  long t = 0;

  /// Returns the clipped step size used and updates theta.
  double step(double& theta, double g) {
    t += 1;
    m = beta1 * m + (1.0 - beta1) * g;
    v = beta2 * v + (1.0 - beta2) * g * g;
    const double m_hat = m / (1.0 - std::pow(beta1, t));
    const double v_hat = v / (1.0 - std::pow(beta2, t));
    const double lower = final_lr * (1.0 - 1.0 / (gamma * t + 1.0));
    const double upper = final_lr * (1.0 + 1.0 / (gamma * t));
    double eta = lr / std::sqrt(v_hat + eps);
    if (eta < lower) eta = lower;
    if (eta > upper) eta = upper;
    theta -= eta * m_hat;
    return eta;
  }
};

/// Non-negative column-normalized M x N matrix with i.i.d. |N(0,1)| entries.
inline MatrixXd random_nonneg_unit(Index rows, Index cols, deepmp::Rng& rng) {
  MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = std::abs(rng.normal());
    m.col(j) /= m.col(j).norm();
  }
  return m;
}

inline MatrixXd random_gaussian(Index rows, Index cols, deepmp::Rng& rng) {
  MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

}  // namespace oracle
