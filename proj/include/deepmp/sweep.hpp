#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "deepmp/core.hpp"
#include "deepmp/network.hpp"
#include "deepmp/solvers.hpp"

namespace deepmp {

enum class SolverKind { NNMP, NNOMP, DeepMP };

std::string to_string(SolverKind kind);
SolverKind parse_solver(const std::string& name);

struct MetricsReport {
  std::string solver;
  Index z = 0;
  /// k -> mean Hamming complement over the Z test mixtures.
  std::map<int, double> recovery;
  /// k -> epsilon(k).
  std::map<int, double> epsilon;
  /// ECDF of the matrix driving selection: the dictionary for the untrained
  /// solvers, the last selection layer of the deepest model for DeepMP.
  std::vector<std::pair<double, double>> ecdf;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

struct SweepOptions {
  int k_min = 1;
  int k_max = 5;
  Index z = 5000;
  std::uint64_t seed = 0;
  /// Projection used by NNMP; DeepMP uses the model's own.
  ProjectionMode proj = ProjectionMode::PositiveOrthant;
  int ecdf_points = 200;
};

/// Test mixtures for sparsity k. The stream is disjoint from the training
/// stream derived from the same master seed.
std::vector<Sample> test_samples(const Dictionary& dict, int k, Index z, std::uint64_t seed);
std::uint64_t train_seed(std::uint64_t master, int k);
std::uint64_t test_seed(std::uint64_t master, int k);

/// Runs each solver at budget K = k on fresh test mixtures for every k in
/// [k_min, k_max]. DeepMP needs a model of depth k for each k.
std::vector<MetricsReport> run_sweep(const Dictionary& dict, const std::vector<SolverKind>& solvers,
                                     const std::map<int, UnfoldedModel>& models,
                                     const SweepOptions& opts);

std::string reports_to_csv(const std::vector<MetricsReport>& reports);
std::string reports_to_json(const std::vector<MetricsReport>& reports);
std::string ecdf_to_csv(const std::vector<std::pair<double, double>>& ecdf);

}  // namespace deepmp
