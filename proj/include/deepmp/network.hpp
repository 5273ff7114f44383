#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

#include "deepmp/core.hpp"
#include "deepmp/solvers.hpp"

namespace deepmp {

/// NNMP unrolled into `depth` blocks. Block k scores atoms with its own
/// trainable selection matrix W^(k); the residual update always uses the
/// fixed dictionary.
class UnfoldedModel {
 public:
  UnfoldedModel(std::vector<Eigen::MatrixXd> selection_weights, Dictionary update_dict,
                ProjectionMode proj);

  int depth() const { return static_cast<int>(weights_.size()); }
  const std::vector<Eigen::MatrixXd>& selection_weights() const { return weights_; }
  std::vector<Eigen::MatrixXd>& selection_weights() { return weights_; }
  const Dictionary& update_dict() const { return dict_; }
  ProjectionMode projection() const { return proj_; }

  /// K * signal_dim * num_atoms.
  Index parameter_count() const;

  friend bool operator==(const UnfoldedModel&, const UnfoldedModel&);

 private:
  std::vector<Eigen::MatrixXd> weights_;
  Dictionary dict_;
  ProjectionMode proj_;
};

/// Every selection matrix starts as a copy of the dictionary, which makes the
/// model compute exactly what nnmp_solve computes.
UnfoldedModel init_from_dictionary(const Dictionary& dict, int depth, ProjectionMode proj);

/// Hard-max inference. Stops early when the best selection score is not
/// strictly positive, when the update coefficient <phi, r> is not strictly
/// positive, or when the residual vanishes.
PursuitResult forward_infer(const UnfoldedModel& model, const Signal& y);

/// Oracle-NNMP ordering of the ground-truth atoms: at each step the remaining
/// true atom with the largest <phi_i, r> is subtracted with that coefficient
/// and P is applied. Depends on the dictionary only.
std::vector<Index> teacher_targets(const Dictionary& dict, const Sample& sample,
                                   ProjectionMode proj);

struct TrainForward {
  /// softmax(W^(k)^T r_k) for each active layer.
  std::vector<Eigen::VectorXd> probabilities;
  /// Teacher-forced r_k for each active layer.
  std::vector<Eigen::VectorXd> residuals;
  /// -log p_k(t_k) for each active layer.
  std::vector<double> target_nll;
  std::vector<Index> targets;
  /// Layers whose input residual did not vanish; later layers are skipped.
  int active_layers = 0;
};

TrainForward forward_train(const UnfoldedModel& model, const Sample& sample);

struct TrainingBatch {
  std::vector<Sample> samples;
  std::vector<std::vector<Index>> targets;
};

/// Builds a batch with teacher targets. Every sample must have sparsity = depth.
TrainingBatch make_training_batch(const UnfoldedModel& model, std::vector<Sample> samples);

struct LossAndGradient {
  double loss = 0.0;
  std::vector<Eigen::MatrixXd> gradients;
  /// Number of (sample, layer) cross-entropy terms averaged into `loss`.
  Index terms = 0;
};

/// Mean categorical cross-entropy -log p_k(t_k) over all active (sample,
/// layer) terms, and its exact gradient: r_k (p_k - e_{t_k})^T summed over the
/// terms of layer k, divided by the same term count.
LossAndGradient loss_and_gradient(const UnfoldedModel& model, const TrainingBatch& batch);

/// Numerically stable softmax.
Eigen::VectorXd softmax(const Eigen::VectorXd& scores);

// Binary container: "DMP1", u32 depth, u32 signal_dim, u32 num_atoms,
// u32 projection (0 identity, 1 positive orthant), then the selection
// matrices and the dictionary as row-major little-endian float64.
void write_model(std::ostream& out, const UnfoldedModel& model);
UnfoldedModel read_model(std::istream& in);
void save_model(const std::string& path, const UnfoldedModel& model);
UnfoldedModel load_model(const std::string& path);

}  // namespace deepmp
