#include "deepmp/optimizer.hpp"

#include <cmath>
#include <string>

#include "deepmp/error.hpp"

namespace deepmp {

OptimizerState OptimizerState::zeros_like(const std::vector<Eigen::MatrixXd>& params,
                                          AdaBoundHyper hyper) {
  OptimizerState s;
  s.hyper = hyper;
  for (const auto& p : params) {
    s.m.push_back(Eigen::MatrixXd::Zero(p.rows(), p.cols()));
    s.v.push_back(Eigen::MatrixXd::Zero(p.rows(), p.cols()));
  }
  return s;
}

StepBounds adabound_bounds(const AdaBoundHyper& hyper, std::int64_t t) {
  const double gt = hyper.gamma * static_cast<double>(t);
  return {hyper.final_lr * (1.0 - 1.0 / (gt + 1.0)), hyper.final_lr * (1.0 + 1.0 / gt)};
}

void adabound_step(OptimizerState& state, std::vector<Eigen::MatrixXd>& params,
                   const std::vector<Eigen::MatrixXd>& grads,
                   std::vector<Eigen::MatrixXd>* step_sizes) {
  if (params.size() != grads.size() || params.size() != state.m.size() ||
      params.size() != state.v.size()) {
    throw Error(Errc::ShapeMismatch, "optimizer got " + std::to_string(params.size()) +
                                         " params, " + std::to_string(grads.size()) +
                                         " grads, " + std::to_string(state.m.size()) +
                                         " state slots");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].rows() != grads[i].rows() || params[i].cols() != grads[i].cols() ||
        params[i].rows() != state.m[i].rows() || params[i].cols() != state.m[i].cols()) {
      throw Error(Errc::ShapeMismatch, "shape mismatch in parameter " + std::to_string(i));
    }
    if (!grads[i].allFinite()) {
      throw Error(Errc::NonFiniteGradient, "gradient " + std::to_string(i) + " is not finite");
    }
  }

  const AdaBoundHyper& h = state.hyper;
  const std::int64_t t = ++state.t;
  const double bc1 = 1.0 - std::pow(h.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(h.beta2, static_cast<double>(t));
  const auto [lower, upper] = adabound_bounds(h, t);

  if (step_sizes) step_sizes->resize(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = h.beta1 * state.m[i] + (1.0 - h.beta1) * grads[i];
    state.v[i] = h.beta2 * state.v[i] + (1.0 - h.beta2) * grads[i].cwiseAbs2();
    const Eigen::ArrayXXd eta =
        (h.lr / ((state.v[i].array() / bc2) + h.epsilon).sqrt()).max(lower).min(upper);
    params[i].array() -= eta * (state.m[i].array() / bc1);
    if (step_sizes) (*step_sizes)[i] = eta.matrix();
  }
}

}  // namespace deepmp
