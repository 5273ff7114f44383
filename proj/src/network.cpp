#include "deepmp/network.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace deepmp {

UnfoldedModel::UnfoldedModel(std::vector<Eigen::MatrixXd> selection_weights,
                             Dictionary update_dict, ProjectionMode proj)
    : weights_(std::move(selection_weights)), dict_(std::move(update_dict)), proj_(proj) {
  if (weights_.empty()) throw Error(Errc::EmptyInput, "model depth must be >= 1");
  for (const auto& w : weights_) {
    if (w.rows() != dict_.signal_dim() || w.cols() != dict_.num_atoms()) {
      throw Error(Errc::ShapeMismatch, "selection matrix is " + std::to_string(w.rows()) + "x" +
                                           std::to_string(w.cols()) + ", dictionary is " +
                                           std::to_string(dict_.signal_dim()) + "x" +
                                           std::to_string(dict_.num_atoms()));
    }
  }
}

Index UnfoldedModel::parameter_count() const {
  return static_cast<Index>(weights_.size()) * dict_.signal_dim() * dict_.num_atoms();
}

bool operator==(const UnfoldedModel& a, const UnfoldedModel& b) {
  if (a.proj_ != b.proj_ || !(a.dict_ == b.dict_) || a.weights_.size() != b.weights_.size())
    return false;
  for (std::size_t k = 0; k < a.weights_.size(); ++k)
    if (a.weights_[k] != b.weights_[k]) return false;
  return true;
}

UnfoldedModel init_from_dictionary(const Dictionary& dict, int depth, ProjectionMode proj) {
  if (depth < 1) throw Error(Errc::EmptyInput, "model depth must be >= 1");
  std::vector<Eigen::MatrixXd> weights(static_cast<std::size_t>(depth), dict.atoms());
  return UnfoldedModel(std::move(weights), dict, proj);
}

PursuitResult forward_infer(const UnfoldedModel& model, const Signal& y) {
  const Dictionary& dict = model.update_dict();
  detail::check_signal(dict, y);

  PursuitResult out;
  out.code = SparseCode::Zero(dict.num_atoms());
  out.residual = y;
  out.residual_norms.push_back(out.residual.norm());

  for (const auto& weights : model.selection_weights()) {
    if (out.residual_norms.back() < Tolerance<double>::residual_floor) break;
    const auto [score, iota] = hard_max(correlate(weights, out.residual));
    if (!(score > 0.0)) break;
    const double coeff = dict.atoms().col(iota).dot(out.residual);
    if (!(coeff > 0.0)) break;
    out.code(iota) += coeff;
    out.support.push_back(iota);
    out.residual -= coeff * dict.atom(iota);
    project_inplace(out.residual, model.projection());
    out.residual_norms.push_back(out.residual.norm());
    ++out.steps_taken;
  }
  return out;
}

namespace {

void check_sample(const UnfoldedModel& model, const Sample& sample) {
  detail::check_signal(model.update_dict(), sample.signal);
  if (sample.sparsity() != model.depth()) {
    throw Error(Errc::SparsityMismatch, "sample sparsity " + std::to_string(sample.sparsity()) +
                                            " != model depth " + std::to_string(model.depth()));
  }
}

// Runs the teacher path along fixed targets, filling probabilities and
// residuals for every layer whose input residual is non-vanishing.
TrainForward forward_along(const UnfoldedModel& model, const Signal& y,
                           const std::vector<Index>& targets) {
  const Dictionary& dict = model.update_dict();
  TrainForward out;
  out.targets = targets;
  Eigen::VectorXd r = y;
  for (int k = 0; k < model.depth(); ++k) {
    if (r.norm() < Tolerance<double>::residual_floor) break;
    const auto& weights = model.selection_weights()[static_cast<std::size_t>(k)];
    const Index t = targets[static_cast<std::size_t>(k)];
    const Eigen::VectorXd scores = correlate(weights, r);
    const double top = scores.maxCoeff();
    const double log_norm = top + std::log((scores.array() - top).exp().sum());
    out.probabilities.push_back((scores.array() - log_norm).exp().matrix());
    out.target_nll.push_back(log_norm - scores(t));
    out.residuals.push_back(r);
    ++out.active_layers;

    const double coeff = dict.atoms().col(t).dot(r);
    r -= coeff * dict.atom(t);
    project_inplace(r, model.projection());
  }
  return out;
}

}  // namespace

Eigen::VectorXd softmax(const Eigen::VectorXd& scores) {
  const double top = scores.maxCoeff();
  Eigen::VectorXd p = (scores.array() - top).exp().matrix();
  return p / p.sum();
}

std::vector<Index> teacher_targets(const Dictionary& dict, const Sample& sample,
                                   ProjectionMode proj) {
  detail::check_signal(dict, sample.signal);
  std::vector<Index> remaining = sample.true_support.indices();
  std::vector<Index> order;
  Eigen::VectorXd r = sample.signal;
  while (!remaining.empty()) {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < remaining.size(); ++l) {
      const double s = dict.atoms().col(remaining[l]).dot(r);
      if (s > best_score) {
        best_score = s;
        best = l;
      }
    }
    const Index t = remaining[best];
    order.push_back(t);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    r -= best_score * dict.atom(t);
    project_inplace(r, proj);
  }
  return order;
}

TrainForward forward_train(const UnfoldedModel& model, const Sample& sample) {
  check_sample(model, sample);
  return forward_along(model, sample.signal,
                       teacher_targets(model.update_dict(), sample, model.projection()));
}

TrainingBatch make_training_batch(const UnfoldedModel& model, std::vector<Sample> samples) {
  TrainingBatch batch;
  batch.targets.reserve(samples.size());
  for (const auto& s : samples) {
    check_sample(model, s);
    batch.targets.push_back(teacher_targets(model.update_dict(), s, model.projection()));
  }
  batch.samples = std::move(samples);
  return batch;
}

LossAndGradient loss_and_gradient(const UnfoldedModel& model, const TrainingBatch& batch) {
  if (batch.samples.empty()) throw Error(Errc::EmptyBatch, "loss over an empty batch");
  if (batch.targets.size() != batch.samples.size()) {
    throw Error(Errc::ShapeMismatch, "batch has " + std::to_string(batch.samples.size()) +
                                         " samples but " +
                                         std::to_string(batch.targets.size()) + " target lists");
  }

  const Dictionary& dict = model.update_dict();
  LossAndGradient out;
  out.gradients.assign(static_cast<std::size_t>(model.depth()),
                       Eigen::MatrixXd::Zero(dict.signal_dim(), dict.num_atoms()));

  double total = 0.0;
  for (std::size_t s = 0; s < batch.samples.size(); ++s) {
    check_sample(model, batch.samples[s]);
    if (static_cast<int>(batch.targets[s].size()) != model.depth()) {
      throw Error(Errc::SparsityMismatch, "target list length != model depth");
    }
    const TrainForward fwd = forward_along(model, batch.samples[s].signal, batch.targets[s]);
    for (int k = 0; k < fwd.active_layers; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const Index t = fwd.targets[ku];
      Eigen::VectorXd delta = fwd.probabilities[ku];
      total += fwd.target_nll[ku];
      delta(t) -= 1.0;
      out.gradients[ku].noalias() += fwd.residuals[ku] * delta.transpose();
      ++out.terms;
    }
  }
  if (out.terms > 0) {
    const double scale = 1.0 / static_cast<double>(out.terms);
    out.loss = total * scale;
    for (auto& g : out.gradients) g *= scale;
  }
  return out;
}

namespace {

constexpr std::array<char, 4> kMagic = {'D', 'M', 'P', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b;
  for (int i = 0; i < 4; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), 4);
}

void put_f64(std::ostream& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), 8);
}

std::uint64_t get_le(std::istream& in, int bytes) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), bytes);
  if (!in) throw Error(Errc::ParseError, "truncated model file");
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(b[static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

void put_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) put_f64(out, m(i, j));
}

Eigen::MatrixXd get_matrix(std::istream& in, Index rows, Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = std::bit_cast<double>(get_le(in, 8));
  return m;
}

}  // namespace

void write_model(std::ostream& out, const UnfoldedModel& model) {
  const Dictionary& dict = model.update_dict();
  out.write(kMagic.data(), 4);
  put_u32(out, static_cast<std::uint32_t>(model.depth()));
  put_u32(out, static_cast<std::uint32_t>(dict.signal_dim()));
  put_u32(out, static_cast<std::uint32_t>(dict.num_atoms()));
  put_u32(out, model.projection() == ProjectionMode::PositiveOrthant ? 1u : 0u);
  for (const auto& w : model.selection_weights()) put_matrix(out, w);
  put_matrix(out, dict.atoms());
}

UnfoldedModel read_model(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || magic != kMagic) throw Error(Errc::ParseError, "not a DMP1 model file");
  const auto depth = static_cast<int>(get_le(in, 4));
  const auto rows = static_cast<Index>(get_le(in, 4));
  const auto cols = static_cast<Index>(get_le(in, 4));
  const auto flag = get_le(in, 4);
  if (depth < 1 || rows < 1 || cols < 1 || flag > 1) {
    throw Error(Errc::ParseError, "corrupt model header");
  }
  std::vector<Eigen::MatrixXd> weights;
  for (int k = 0; k < depth; ++k) weights.push_back(get_matrix(in, rows, cols));
  Dictionary dict = validate_dictionary(get_matrix(in, rows, cols));
  return UnfoldedModel(std::move(weights), std::move(dict),
                       flag == 1 ? ProjectionMode::PositiveOrthant : ProjectionMode::Identity);
}

void save_model(const std::string& path, const UnfoldedModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  write_model(out, model);
  if (!out) throw Error(Errc::IoError, "write failed for " + path);
}

UnfoldedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::MissingModel, "cannot open model " + path);
  return read_model(in);
}

}  // namespace deepmp
