#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "deepmp/datagen.hpp"
#include "deepmp/network.hpp"
#include "deepmp/optimizer.hpp"

namespace deepmp {

struct TrainOptions {
  int epochs = 20;
  Index batch_size = 128;
  AdaBoundHyper hyper;
  /// Trailing fraction of the mixtures held out for validation reporting.
  double val_fraction = 0.1;
  std::uint64_t seed = 0;
};

struct EpochLog {
  int epoch = 0;
  double mean_loss = 0.0;
  double val_recovery = 0.0;
};

struct TrainResult {
  UnfoldedModel model;
  /// Row 0 describes the untrained model; row e the state after epoch e.
  std::vector<EpochLog> log;
};

/// Mean Hamming complement of forward_infer over the given mixtures.
double mean_recovery(const UnfoldedModel& model, const std::vector<Mixture>& mixtures);

/// Trains a depth-k model from init_from_dictionary with AdaBound over the
/// teacher-forced cross-entropy. Mixtures are synthesized batch by batch and
/// shuffled each epoch with a generator derived from `opts.seed`.
TrainResult train_deepmp(const Dictionary& dict, int k, ProjectionMode proj,
                         const std::vector<Mixture>& mixtures, const TrainOptions& opts,
                         const std::function<void(const EpochLog&)>& on_epoch = {});

}  // namespace deepmp
