#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deepmp/solvers.hpp"
#include "deepmp/sweep.hpp"
#include "deepmp/training.hpp"

namespace deepmp {

enum class DictionarySource { Synthetic, Raman, Surrogate };

/// Everything a run needs. Defaults reproduce the full-scale synthetic
/// setting: 30 x 200 dictionary, 150000 training mixtures per k, lr 1e-3,
/// final_lr 0.1, 20 epochs (30 for a Raman library).
struct RunConfig {
  DictionarySource source = DictionarySource::Synthetic;
  std::optional<Index> signal_dim;
  std::optional<Index> num_atoms;
  std::string raman_path;
  int peaks_per_atom = 3;

  int k_min = 1;
  int k_max = 5;
  Index num_train_samples = 150000;
  Index z_test = 5000;

  std::optional<int> epochs;
  Index batch_size = 128;
  AdaBoundHyper hyper;
  double val_fraction = 0.1;
  ProjectionMode proj = ProjectionMode::PositiveOrthant;

  std::vector<SolverKind> solvers = {SolverKind::NNMP, SolverKind::NNOMP, SolverKind::DeepMP};
  int ecdf_points = 200;

  std::uint64_t seed = 1;
  double scale = 1.0;
  std::string out_dir = "run";

  Index effective_signal_dim() const;
  Index effective_num_atoms() const;
  int effective_epochs() const;
  Index scaled_train_samples() const;
  Index scaled_z_test() const;
  TrainOptions train_options() const;
  SweepOptions sweep_options() const;

  /// Throws BadConfig on an inconsistent configuration.
  void validate() const;

  /// Section/key text that parse_config_text reads back to an equal config.
  std::string to_ini() const;
};

/// Applies one "section.key=value" assignment. Unknown keys are BadConfig.
void apply_setting(RunConfig& cfg, const std::string& section, const std::string& key,
                   const std::string& value);
void apply_override(RunConfig& cfg, const std::string& assignment);

RunConfig parse_config_text(const std::string& ini);
RunConfig load_config(const std::string& path);

}  // namespace deepmp
