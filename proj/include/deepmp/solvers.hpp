#pragma once

#include <Eigen/Dense>

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "deepmp/core.hpp"

namespace deepmp {

/// The operator P applied to the residual after each update.
enum class ProjectionMode { Identity, PositiveOrthant };

template <typename Derived>
void project_inplace(Eigen::MatrixBase<Derived>& r, ProjectionMode mode) {
  if (mode == ProjectionMode::PositiveOrthant) r = r.cwiseMax(typename Derived::Scalar(0));
}

template <typename Scalar = double>
struct BasicPursuitResult {
  BasicSparseCode<Scalar> code;
  SupportSet support;
  BasicSignal<Scalar> residual;
  int steps_taken = 0;
  /// ||r_k|| for k = 0..steps_taken; entry 0 is ||y||.
  std::vector<Scalar> residual_norms;
};

using PursuitResult = BasicPursuitResult<double>;

/// Largest entry and its position, lowest index on ties.
template <typename Derived>
std::pair<typename Derived::Scalar, Index> hard_max(const Eigen::MatrixBase<Derived>& scores) {
  if (scores.size() == 0) throw Error(Errc::EmptyInput, "hard_max of an empty vector");
  Index best = 0;
  auto value = scores(0);
  for (Index i = 1; i < scores.size(); ++i) {
    if (scores(i) > value) {
      value = scores(i);
      best = i;
    }
  }
  return {value, best};
}

namespace detail {

template <typename Scalar, typename Derived>
void check_signal(const BasicDictionary<Scalar>& dict, const Eigen::MatrixBase<Derived>& y) {
  if (y.size() != dict.signal_dim()) {
    throw Error(Errc::DimensionMismatch, "signal length " + std::to_string(y.size()) +
                                             " != signal_dim " +
                                             std::to_string(dict.signal_dim()));
  }
}

inline void check_budget(int budget) {
  if (budget < 1) throw Error(Errc::EmptyInput, "pursuit budget K must be >= 1");
}

}  // namespace detail

/// Non-negative matching pursuit.
///
/// Each step picks (zeta, iota) = hard_max(Phi^T r), adds zeta to x[iota] and
/// sets r <- P(r - zeta * phi_iota). Runs until K steps, until the best score
/// is no longer strictly positive, or until the residual vanishes.
template <typename Scalar, typename Derived>
BasicPursuitResult<Scalar> nnmp_solve(const BasicDictionary<Scalar>& dict,
                                      const Eigen::MatrixBase<Derived>& y, int budget,
                                      ProjectionMode proj) {
  detail::check_signal(dict, y);
  detail::check_budget(budget);

  BasicPursuitResult<Scalar> out;
  out.code = BasicSparseCode<Scalar>::Zero(dict.num_atoms());
  out.residual = y;
  out.residual_norms.push_back(out.residual.norm());

  for (int k = 0; k < budget; ++k) {
    if (out.residual_norms.back() < Tolerance<Scalar>::residual_floor) break;
    const auto [zeta, iota] = hard_max(correlate(dict.atoms(), out.residual));
    if (!(zeta > Scalar(0))) break;
    out.code(iota) += zeta;
    out.support.push_back(iota);
    out.residual -= zeta * dict.atom(iota);
    project_inplace(out.residual, proj);
    out.residual_norms.push_back(out.residual.norm());
    ++out.steps_taken;
  }
  return out;
}

/// Lawson-Hanson active-set solver for min ||A x - b|| subject to x >= 0.
///
/// A must have full column rank. Throws MaxIterationsExceeded after
/// 3 * cols outer iterations.
template <typename DerivedA, typename DerivedB>
Vector<typename DerivedA::Scalar> nnls_active_set(const Eigen::MatrixBase<DerivedA>& a,
                                                  const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Index n = a.cols();
  if (a.rows() != b.size()) {
    throw Error(Errc::DimensionMismatch, "nnls: A has " + std::to_string(a.rows()) +
                                             " rows but b has length " +
                                             std::to_string(b.size()));
  }
  Vector<Scalar> x = Vector<Scalar>::Zero(n);
  if (n == 0) return x;

  const Matrix<Scalar> am = a;
  const Vector<Scalar> bv = b;
  const Scalar tol = Scalar(64) * std::numeric_limits<Scalar>::epsilon() * am.norm() *
                     std::max(Scalar(1), bv.norm());

  std::vector<bool> passive(n, false);
  std::vector<bool> blocked(n, false);
  const int max_iter = 3 * static_cast<int>(n);
  int iter = 0;

  auto solve_passive = [&](Vector<Scalar>& z) {
    std::vector<Index> cols;
    for (Index j = 0; j < n; ++j)
      if (passive[j]) cols.push_back(j);
    Matrix<Scalar> sub(am.rows(), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Index>(c)) = am.col(cols[c]);
    const Vector<Scalar> zs = sub.colPivHouseholderQr().solve(bv);
    z.setZero(n);
    for (std::size_t c = 0; c < cols.size(); ++c) z(cols[c]) = zs(static_cast<Index>(c));
  };

  Vector<Scalar> z(n);
  while (true) {
    const Vector<Scalar> w = am.transpose() * (bv - am * x);
    Index pick = -1;
    Scalar best = tol;
    for (Index j = 0; j < n; ++j) {
      if (!passive[j] && !blocked[j] && w(j) > best) {
        best = w(j);
        pick = j;
      }
    }
    if (pick < 0) break;
    if (++iter > max_iter) {
      throw Error(Errc::MaxIterationsExceeded,
                  "nnls did not converge in " + std::to_string(max_iter) + " iterations");
    }

    passive[pick] = true;
    solve_passive(z);
    if (!(z(pick) > Scalar(0))) {
      // The incoming column cannot move off zero; it is optimal there up to
      // rounding. Skip it until the passive set changes.
      passive[pick] = false;
      blocked[pick] = true;
      continue;
    }
    std::fill(blocked.begin(), blocked.end(), false);

    while (true) {
      bool feasible = true;
      for (Index j = 0; j < n; ++j)
        if (passive[j] && z(j) <= Scalar(0)) feasible = false;
      if (feasible) {
        x = z;
        break;
      }
      Scalar alpha = Scalar(1);
      for (Index j = 0; j < n; ++j) {
        if (passive[j] && z(j) <= Scalar(0)) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      }
      x += alpha * (z - x);
      for (Index j = 0; j < n; ++j) {
        if (passive[j] && x(j) <= std::numeric_limits<Scalar>::epsilon() * Scalar(16)) {
          passive[j] = false;
          x(j) = Scalar(0);
        }
      }
      solve_passive(z);
    }
  }
  return x;
}

/// Orthogonal variant of NNMP: same selection rule, but every step refits all
/// selected coefficients with nnls_active_set and uses r = y - Phi_s x_s.
/// Never re-selects an atom.
template <typename Scalar, typename Derived>
BasicPursuitResult<Scalar> nnomp_solve(const BasicDictionary<Scalar>& dict,
                                       const Eigen::MatrixBase<Derived>& y, int budget) {
  detail::check_signal(dict, y);
  detail::check_budget(budget);

  const BasicSignal<Scalar> target = y;
  BasicPursuitResult<Scalar> out;
  out.code = BasicSparseCode<Scalar>::Zero(dict.num_atoms());
  out.residual = target;
  out.residual_norms.push_back(out.residual.norm());

  Matrix<Scalar> selected(dict.signal_dim(), 0);
  for (int k = 0; k < budget; ++k) {
    if (out.residual_norms.back() < Tolerance<Scalar>::residual_floor) break;
    if (static_cast<Index>(out.support.size()) >= dict.signal_dim()) break;
    const auto [zeta, iota] = hard_max(correlate(dict.atoms(), out.residual));
    if (!(zeta > Scalar(0)) || out.support.contains(iota)) break;

    out.support.push_back(iota);
    selected.conservativeResize(Eigen::NoChange, selected.cols() + 1);
    selected.col(selected.cols() - 1) = dict.atom(iota);

    const Vector<Scalar> coeffs = nnls_active_set(selected, target);
    out.code.setZero();
    for (std::size_t l = 0; l < out.support.size(); ++l)
      out.code(out.support[l]) = coeffs(static_cast<Index>(l));
    out.residual = target - selected * coeffs;
    out.residual_norms.push_back(out.residual.norm());
    ++out.steps_taken;
  }
  return out;
}

}  // namespace deepmp
