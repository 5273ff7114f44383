#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "deepmp/core.hpp"

namespace deepmp {

/// i.i.d. standard normal entries, negatives clamped to zero, columns scaled
/// to unit norm. A column that clamps to all zeros is redrawn (up to 100
/// times).
Dictionary generate_synthetic_dictionary(Index signal_dim, Index num_atoms, std::uint64_t seed);

struct MixtureConfig {
  int sparsity = 1;
  Index num_samples = 1;
  std::uint64_t seed = 0;
};

/// Ground truth of one mixture without the synthesized signal.
struct Mixture {
  std::vector<Index> support;
  std::vector<double> coeffs;

  friend bool operator==(const Mixture&, const Mixture&) = default;
};

/// Samples are drawn in fixed-size shards, each with its own derived seed,
/// so any shard can be regenerated on its own.
inline constexpr Index kMixtureShardSize = 10000;

/// k distinct atoms uniformly without replacement, coefficients uniform on
/// (0, 1].
std::vector<Mixture> sample_mixture_specs(Index num_atoms, const MixtureConfig& cfg);
std::vector<Mixture> sample_mixture_shard(Index num_atoms, const MixtureConfig& cfg, Index shard);

Sample realize(const Dictionary& dict, const Mixture& mixture);

std::vector<Sample> sample_mixture(const Dictionary& dict, const MixtureConfig& cfg);

struct RamanLibrary {
  Dictionary dictionary;
  /// Negative readings clamped to zero while loading.
  Index clamped_entries = 0;
};

/// CSV spectra, one row per wavenumber and one column per compound. Columns
/// are normalized on load.
RamanLibrary load_raman_library(const std::string& path);
RamanLibrary raman_library_from_matrix(Eigen::MatrixXd spectra);

struct SurrogateShape {
  /// Lorentzian half-width range, in grid points.
  double min_width = 2.0;
  double max_width = 12.0;
  /// Peak of the broad background relative to the tallest line; 0 disables it.
  double background_level = 0.6;
};

/// Raman-like dictionary: each atom is a broad smooth background plus
/// `peaks_per_atom` Lorentzian lines with random centers, widths and heights.
Dictionary generate_raman_surrogate(Index signal_dim, Index num_atoms, int peaks_per_atom,
                                    std::uint64_t seed, const SurrogateShape& shape = {});

}  // namespace deepmp
