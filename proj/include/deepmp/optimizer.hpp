#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace deepmp {

struct AdaBoundHyper {
  double lr = 1e-3;
  double final_lr = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double gamma = 1e-3;
  double epsilon = 1e-8;
};

/// Moment accumulators for a list of matrix parameters. `t` counts completed
/// steps.
struct OptimizerState {
  std::vector<Eigen::MatrixXd> m;
  std::vector<Eigen::MatrixXd> v;
  std::int64_t t = 0;
  AdaBoundHyper hyper;

  static OptimizerState zeros_like(const std::vector<Eigen::MatrixXd>& params,
                                   AdaBoundHyper hyper = {});
};

/// Step-size bounds at step t >= 1; both converge to final_lr.
struct StepBounds {
  double lower;
  double upper;
};
StepBounds adabound_bounds(const AdaBoundHyper& hyper, std::int64_t t);

/// One AdaBound update:
///   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2,
///   eta = clip(lr / sqrt(v_hat + eps), lower(t), upper(t)),
///   theta <- theta - eta * m_hat.
/// Inputs are validated before anything is modified. When `step_sizes` is
/// given it receives the per-coordinate eta.
void adabound_step(OptimizerState& state, std::vector<Eigen::MatrixXd>& params,
                   const std::vector<Eigen::MatrixXd>& grads,
                   std::vector<Eigen::MatrixXd>* step_sizes = nullptr);

}  // namespace deepmp
