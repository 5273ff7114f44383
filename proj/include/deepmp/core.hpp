#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "deepmp/error.hpp"

namespace deepmp {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A signal y or a residual r_k, length signal_dim.
template <typename Scalar = double>
using BasicSignal = Vector<Scalar>;
/// Coefficient vector x over all atoms, length num_atoms.
template <typename Scalar = double>
using BasicSparseCode = Vector<Scalar>;

using Signal = BasicSignal<double>;
using SparseCode = BasicSparseCode<double>;

template <typename Scalar>
struct Tolerance;

template <>
struct Tolerance<double> {
  static constexpr double validate_norm = 1e-6;
  static constexpr double residual_floor = 1e-12;
};

template <>
struct Tolerance<float> {
  static constexpr float validate_norm = 1e-4f;
  static constexpr float residual_floor = 1e-6f;
};

/// Ordered multiset of atom indices, in the order a pursuit selected them.
class SupportSet {
 public:
  SupportSet() = default;
  SupportSet(std::initializer_list<Index> indices) : indices_(indices) {}
  explicit SupportSet(std::vector<Index> indices) : indices_(std::move(indices)) {}

  void push_back(Index i) { indices_.push_back(i); }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  Index operator[](std::size_t n) const { return indices_[n]; }
  bool contains(Index i) const {
    return std::find(indices_.begin(), indices_.end(), i) != indices_.end();
  }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }
  const std::vector<Index>& indices() const { return indices_; }

  /// Sorted distinct indices (re-selections collapsed).
  std::vector<Index> distinct() const {
    std::vector<Index> out = indices_;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  friend bool operator==(const SupportSet&, const SupportSet&) = default;

 private:
  std::vector<Index> indices_;
};

/// Column-normalized, non-negative, overcomplete atom matrix Phi.
///
/// Atoms are stored as contiguous columns since the dominant kernel is one
/// dot product per atom. Instances only come out of validate_dictionary, so
/// holding one means the invariants hold.
template <typename Scalar = double>
class BasicDictionary {
 public:
  using MatrixType = Matrix<Scalar>;

  const MatrixType& atoms() const { return atoms_; }
  Index signal_dim() const { return atoms_.rows(); }
  Index num_atoms() const { return atoms_.cols(); }
  auto atom(Index j) const { return atoms_.col(j); }

  friend bool operator==(const BasicDictionary& a, const BasicDictionary& b) {
    return a.atoms_.rows() == b.atoms_.rows() && a.atoms_.cols() == b.atoms_.cols() &&
           a.atoms_ == b.atoms_;
  }

 private:
  explicit BasicDictionary(MatrixType atoms) : atoms_(std::move(atoms)) {}

  template <typename Derived>
  friend BasicDictionary<typename Derived::Scalar> validate_dictionary(
      const Eigen::MatrixBase<Derived>& atoms);

  MatrixType atoms_;
};

using Dictionary = BasicDictionary<double>;

template <typename Derived>
BasicDictionary<typename Derived::Scalar> validate_dictionary(
    const Eigen::MatrixBase<Derived>& atoms) {
  using Scalar = typename Derived::Scalar;
  if (atoms.size() == 0) throw Error(Errc::EmptyInput, "dictionary matrix is empty");
  if (atoms.rows() >= atoms.cols()) {
    throw Error(Errc::NotOvercomplete, "signal_dim " + std::to_string(atoms.rows()) +
                                           " must be < num_atoms " +
                                           std::to_string(atoms.cols()));
  }
  for (Index j = 0; j < atoms.cols(); ++j) {
    for (Index i = 0; i < atoms.rows(); ++i) {
      const Scalar v = atoms(i, j);
      if (!std::isfinite(v)) {
        throw Error(Errc::NotNormalized, "non-finite entry at (" + std::to_string(i) + ", " +
                                             std::to_string(j) + ")");
      }
      if (v < Scalar(0)) {
        throw Error(Errc::NegativeEntry, "entry (" + std::to_string(i) + ", " +
                                             std::to_string(j) + ") is negative");
      }
    }
    const Scalar norm = atoms.col(j).norm();
    if (std::abs(norm - Scalar(1)) > Tolerance<Scalar>::validate_norm) {
      throw Error(Errc::NotNormalized,
                  "column " + std::to_string(j) + " has norm " + std::to_string(norm));
    }
  }
  return BasicDictionary<Scalar>(atoms.eval());
}

/// Scales every column to unit Euclidean norm. Zero columns are left as is.
template <typename Derived>
Matrix<typename Derived::Scalar> normalize_columns(const Eigen::MatrixBase<Derived>& m) {
  Matrix<typename Derived::Scalar> out = m;
  for (Index j = 0; j < out.cols(); ++j) {
    const auto norm = out.col(j).norm();
    if (norm > 0) out.col(j) /= norm;
  }
  return out;
}

/// y = Phi x
template <typename Scalar, typename Derived>
BasicSignal<Scalar> synthesize(const BasicDictionary<Scalar>& dict,
                               const Eigen::MatrixBase<Derived>& code) {
  if (code.size() != dict.num_atoms()) {
    throw Error(Errc::DimensionMismatch, "code length " + std::to_string(code.size()) +
                                             " != num_atoms " +
                                             std::to_string(dict.num_atoms()));
  }
  return dict.atoms() * code;
}

/// Phi^T r computed as one column dot product per atom.
///
/// Every solver and the unfolded network score atoms through this function,
/// so a score and a later recomputed <phi_j, r> are the same floating-point
/// expression.
template <typename DerivedW, typename DerivedR>
Vector<typename DerivedW::Scalar> correlate(const Eigen::MatrixBase<DerivedW>& weights,
                                            const Eigen::MatrixBase<DerivedR>& r) {
  Vector<typename DerivedW::Scalar> scores(weights.cols());
  for (Index j = 0; j < weights.cols(); ++j) scores(j) = weights.col(j).dot(r);
  return scores;
}

/// A noiseless mixture y = sum_l a_l phi_{i_l} with its ground truth.
template <typename Scalar = double>
struct BasicSample {
  BasicSignal<Scalar> signal;
  SupportSet true_support;
  std::vector<Scalar> true_coeffs;

  int sparsity() const { return static_cast<int>(true_support.size()); }

  BasicSparseCode<Scalar> true_code(Index num_atoms) const {
    BasicSparseCode<Scalar> x = BasicSparseCode<Scalar>::Zero(num_atoms);
    for (std::size_t l = 0; l < true_support.size(); ++l) x(true_support[l]) += true_coeffs[l];
    return x;
  }
};

using Sample = BasicSample<double>;

}  // namespace deepmp
