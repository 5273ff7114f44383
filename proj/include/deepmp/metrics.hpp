#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "deepmp/core.hpp"

namespace deepmp {

/// Fraction of ground-truth atoms found: |distinct(s_a) ∩ s_g| / k.
/// Re-selected atoms count once.
inline double hamming_complement(const SupportSet& acquired, const SupportSet& truth, int k) {
  if (k <= 0) throw Error(Errc::ZeroSparsity, "hamming_complement needs k >= 1");
  const std::vector<Index> a = acquired.distinct();
  const std::vector<Index> g = truth.distinct();
  std::vector<Index> common;
  std::set_intersection(a.begin(), a.end(), g.begin(), g.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(k);
}

/// The unnormalized indicator-vector sum, sum_n (1 - |a_n - g_n| / k) over all
/// num_atoms positions. Not confined to [0, 1]; kept for auditing only.
inline double hamming_complement_raw(const SupportSet& acquired, const SupportSet& truth, int k,
                                     Index num_atoms) {
  if (k <= 0) throw Error(Errc::ZeroSparsity, "hamming_complement needs k >= 1");
  double total = 0.0;
  for (Index n = 0; n < num_atoms; ++n) {
    const double diff = std::abs((acquired.contains(n) ? 1.0 : 0.0) - (truth.contains(n) ? 1.0 : 0.0));
    total += 1.0 - diff / static_cast<double>(k);
  }
  return total;
}

/// Mean of ||y - Phi x|| / ||y|| over aligned samples and codes.
template <typename Scalar>
Scalar epsilon_error(const BasicDictionary<Scalar>& dict,
                     const std::vector<BasicSample<Scalar>>& samples,
                     const std::vector<BasicSparseCode<Scalar>>& codes) {
  if (samples.size() != codes.size()) {
    throw Error(Errc::DimensionMismatch, "epsilon_error: " + std::to_string(samples.size()) +
                                             " samples vs " + std::to_string(codes.size()) +
                                             " codes");
  }
  if (samples.empty()) throw Error(Errc::EmptyInput, "epsilon_error over no samples");
  Scalar total = 0;
  for (std::size_t z = 0; z < samples.size(); ++z) {
    const Scalar denom = samples[z].signal.norm();
    if (!(denom > Scalar(0))) {
      throw Error(Errc::ZeroSignal, "sample " + std::to_string(z) + " has a zero signal");
    }
    total += (samples[z].signal - synthesize(dict, codes[z])).norm() / denom;
  }
  return total / static_cast<Scalar>(samples.size());
}

/// |<w_i, w_j>| / (||w_i|| ||w_j||) for every unordered pair i < j, as the
/// strict upper triangle of the normalized absolute Gram matrix (clamped to 1).
template <typename Derived>
Matrix<typename Derived::Scalar> normalized_gram(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.cols() < 2) throw Error(Errc::EmptyInput, "coherence needs at least two columns");
  Matrix<Scalar> unit(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j) {
    const Scalar norm = m.col(j).norm();
    if (!(norm > Scalar(0))) {
      throw Error(Errc::ZeroColumn, "column " + std::to_string(j) + " is zero");
    }
    unit.col(j) = m.col(j) / norm;
  }
  Matrix<Scalar> gram = (unit.transpose() * unit).cwiseAbs();
  return gram.cwiseMin(Scalar(1));
}

/// Mutual coherence: the largest normalized pairwise |inner product|.
/// Columns are normalized inside the metric; the input is not modified.
template <typename Derived>
typename Derived::Scalar coherence(const Eigen::MatrixBase<Derived>& m) {
  const auto gram = normalized_gram(m);
  typename Derived::Scalar best = 0;
  for (Index j = 1; j < gram.cols(); ++j)
    for (Index i = 0; i < j; ++i) best = std::max(best, gram(i, j));
  return best;
}

/// All C(N, 2) pairwise coherences, sorted ascending.
template <typename Derived>
std::vector<typename Derived::Scalar> pairwise_coherences(const Eigen::MatrixBase<Derived>& m) {
  const auto gram = normalized_gram(m);
  std::vector<typename Derived::Scalar> values;
  values.reserve(static_cast<std::size_t>(gram.cols() * (gram.cols() - 1) / 2));
  for (Index j = 1; j < gram.cols(); ++j)
    for (Index i = 0; i < j; ++i) values.push_back(gram(i, j));
  std::sort(values.begin(), values.end());
  return values;
}

/// `points` evenly spaced values from 0 to 1 inclusive.
inline std::vector<double> uniform_grid(int points) {
  std::vector<double> grid;
  if (points < 2) return {1.0};
  for (int i = 0; i < points; ++i) grid.push_back(static_cast<double>(i) / (points - 1));
  grid.back() = 1.0;
  return grid;
}

/// Fraction of unordered column pairs whose coherence is <= t, per grid point.
template <typename Derived>
std::vector<std::pair<double, double>> coherence_ecdf(const Eigen::MatrixBase<Derived>& m,
                                                      const std::vector<double>& grid) {
  const auto values = pairwise_coherences(m);
  const double pairs = static_cast<double>(values.size());
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  for (double t : grid) {
    const auto count = std::upper_bound(values.begin(), values.end(), t) - values.begin();
    out.emplace_back(t, static_cast<double>(count) / pairs);
  }
  return out;
}

}  // namespace deepmp
