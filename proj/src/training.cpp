#include "deepmp/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "deepmp/metrics.hpp"
#include "deepmp/rng.hpp"

namespace deepmp {

double mean_recovery(const UnfoldedModel& model, const std::vector<Mixture>& mixtures) {
  if (mixtures.empty()) return 0.0;
  double total = 0.0;
  for (const auto& m : mixtures) {
    const Sample s = realize(model.update_dict(), m);
    total += hamming_complement(forward_infer(model, s.signal).support, s.true_support,
                                s.sparsity());
  }
  return total / static_cast<double>(mixtures.size());
}

namespace {

TrainingBatch batch_from(const UnfoldedModel& model, const std::vector<Mixture>& mixtures,
                         const std::vector<std::size_t>& order, std::size_t begin,
                         std::size_t end) {
  std::vector<Sample> samples;
  samples.reserve(end - begin);
  for (std::size_t n = begin; n < end; ++n)
    samples.push_back(realize(model.update_dict(), mixtures[order[n]]));
  return make_training_batch(model, std::move(samples));
}

void check_loss(double loss, int epoch) {
  if (!std::isfinite(loss)) {
    throw Error(Errc::NonFiniteLoss, "loss became " + std::to_string(loss) + " in epoch " +
                                         std::to_string(epoch));
  }
}

}  // namespace

TrainResult train_deepmp(const Dictionary& dict, int k, ProjectionMode proj,
                         const std::vector<Mixture>& mixtures, const TrainOptions& opts,
                         const std::function<void(const EpochLog&)>& on_epoch) {
  if (opts.batch_size < 1) throw Error(Errc::BadConfig, "batch_size must be >= 1");
  if (opts.epochs < 0) throw Error(Errc::BadConfig, "epochs must be >= 0");
  if (!(opts.val_fraction >= 0.0 && opts.val_fraction < 1.0)) {
    throw Error(Errc::BadConfig, "val_fraction must lie in [0, 1)");
  }

  TrainResult result{init_from_dictionary(dict, k, proj), {}};
  UnfoldedModel& model = result.model;

  const auto held_out = static_cast<std::size_t>(
      std::floor(opts.val_fraction * static_cast<double>(mixtures.size())));
  const std::size_t train_count = mixtures.size() - held_out;
  if (train_count == 0) throw Error(Errc::EmptyBatch, "no training mixtures");
  const std::vector<Mixture> train(mixtures.begin(),
                                   mixtures.begin() + static_cast<std::ptrdiff_t>(train_count));
  const std::vector<Mixture> val(mixtures.begin() + static_cast<std::ptrdiff_t>(train_count),
                                 mixtures.end());

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batch = static_cast<std::size_t>(opts.batch_size);

  auto record = [&](int epoch, double loss) {
    EpochLog row{epoch, loss, mean_recovery(model, val)};
    result.log.push_back(row);
    if (on_epoch) on_epoch(row);
  };

  {
    double total = 0.0;
    Index terms = 0;
    for (std::size_t b = 0; b < train.size(); b += batch) {
      const auto lg = loss_and_gradient(model, batch_from(model, train, order, b,
                                                          std::min(train.size(), b + batch)));
      total += lg.loss * static_cast<double>(lg.terms);
      terms += lg.terms;
    }
    const double loss = terms ? total / static_cast<double>(terms) : 0.0;
    check_loss(loss, 0);
    record(0, loss);
  }

  OptimizerState state = OptimizerState::zeros_like(model.selection_weights(), opts.hyper);
  Rng rng(derive_seed(opts.seed, "shuffle", static_cast<std::uint64_t>(k)));
  for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
    rng.shuffle(order);
    double total = 0.0;
    Index terms = 0;
    for (std::size_t b = 0; b < train.size(); b += batch) {
      const auto lg = loss_and_gradient(model, batch_from(model, train, order, b,
                                                          std::min(train.size(), b + batch)));
      check_loss(lg.loss, epoch);
      total += lg.loss * static_cast<double>(lg.terms);
      terms += lg.terms;
      adabound_step(state, model.selection_weights(), lg.gradients);
    }
    record(epoch, terms ? total / static_cast<double>(terms) : 0.0);
  }
  return result;
}

}  // namespace deepmp
