#include "deepmp/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deepmp/io.hpp"
#include "deepmp/rng.hpp"

namespace deepmp {

Dictionary generate_synthetic_dictionary(Index signal_dim, Index num_atoms, std::uint64_t seed) {
  if (signal_dim < 1 || signal_dim >= num_atoms) {
    throw Error(Errc::NotOvercomplete, "synthetic dictionary needs 0 < signal_dim < num_atoms");
  }
  Rng rng(derive_seed(seed, "synthetic-dictionary"));
  Eigen::MatrixXd atoms(signal_dim, num_atoms);
  constexpr int kMaxRedraws = 100;
  for (Index j = 0; j < num_atoms; ++j) {
    int draws = 0;
    for (;;) {
      for (Index i = 0; i < signal_dim; ++i) atoms(i, j) = std::max(0.0, rng.normal());
      const double norm = atoms.col(j).norm();
      if (norm > 0.0) {
        atoms.col(j) /= norm;
        break;
      }
      if (++draws > kMaxRedraws) {
        throw Error(Errc::DegenerateColumn,
                    "column " + std::to_string(j) + " stayed zero after 100 redraws");
      }
    }
  }
  return validate_dictionary(atoms);
}

std::vector<Mixture> sample_mixture_shard(Index num_atoms, const MixtureConfig& cfg, Index shard) {
  if (cfg.sparsity < 1) throw Error(Errc::ZeroSparsity, "mixture sparsity must be >= 1");
  if (cfg.sparsity > num_atoms) {
    throw Error(Errc::DimensionMismatch, "sparsity " + std::to_string(cfg.sparsity) +
                                             " exceeds num_atoms " + std::to_string(num_atoms));
  }
  const Index begin = shard * kMixtureShardSize;
  const Index end = std::min(cfg.num_samples, begin + kMixtureShardSize);
  Rng rng(derive_seed(cfg.seed, "mixture", static_cast<std::uint64_t>(cfg.sparsity),
                      static_cast<std::uint64_t>(shard)));
  std::vector<Mixture> out;
  out.reserve(static_cast<std::size_t>(std::max<Index>(0, end - begin)));
  for (Index n = begin; n < end; ++n) {
    Mixture m;
    for (auto i : rng.choose_distinct(num_atoms, cfg.sparsity)) m.support.push_back(i);
    for (int l = 0; l < cfg.sparsity; ++l) m.coeffs.push_back(rng.uniform_open_closed());
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Mixture> sample_mixture_specs(Index num_atoms, const MixtureConfig& cfg) {
  if (cfg.num_samples < 1) throw Error(Errc::EmptyInput, "num_samples must be >= 1");
  std::vector<Mixture> out;
  out.reserve(static_cast<std::size_t>(cfg.num_samples));
  const Index shards = (cfg.num_samples + kMixtureShardSize - 1) / kMixtureShardSize;
  for (Index s = 0; s < shards; ++s) {
    auto part = sample_mixture_shard(num_atoms, cfg, s);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

Sample realize(const Dictionary& dict, const Mixture& mixture) {
  Sample s;
  s.signal = Signal::Zero(dict.signal_dim());
  for (std::size_t l = 0; l < mixture.support.size(); ++l) {
    s.signal += mixture.coeffs[l] * dict.atom(mixture.support[l]);
  }
  s.true_support = SupportSet(mixture.support);
  s.true_coeffs = mixture.coeffs;
  return s;
}

std::vector<Sample> sample_mixture(const Dictionary& dict, const MixtureConfig& cfg) {
  std::vector<Sample> out;
  for (const auto& m : sample_mixture_specs(dict.num_atoms(), cfg)) out.push_back(realize(dict, m));
  return out;
}

RamanLibrary raman_library_from_matrix(Eigen::MatrixXd spectra) {
  if (spectra.size() == 0) throw Error(Errc::EmptyLibrary, "spectral library has no entries");
  Index clamped = 0;
  for (Index j = 0; j < spectra.cols(); ++j) {
    for (Index i = 0; i < spectra.rows(); ++i) {
      if (spectra(i, j) < 0.0) {
        spectra(i, j) = 0.0;
        ++clamped;
      }
    }
    if (spectra.col(j).norm() == 0.0) {
      throw Error(Errc::ZeroColumn, "spectrum " + std::to_string(j) + " is identically zero");
    }
  }
  return {validate_dictionary(normalize_columns(spectra)), clamped};
}

RamanLibrary load_raman_library(const std::string& path) {
  return raman_library_from_matrix(read_matrix_csv(path));
}

Dictionary generate_raman_surrogate(Index signal_dim, Index num_atoms, int peaks_per_atom,
                                    std::uint64_t seed, const SurrogateShape& shape) {
  if (peaks_per_atom < 1) throw Error(Errc::EmptyInput, "peaks_per_atom must be >= 1");
  if (signal_dim < 1 || signal_dim >= num_atoms) {
    throw Error(Errc::NotOvercomplete, "surrogate dictionary needs 0 < signal_dim < num_atoms");
  }
  Rng rng(derive_seed(seed, "raman-surrogate"));
  const double span = static_cast<double>(signal_dim);
  Eigen::MatrixXd atoms = Eigen::MatrixXd::Zero(signal_dim, num_atoms);
  for (Index j = 0; j < num_atoms; ++j) {
    if (shape.background_level > 0.0) {
      const double center = rng.uniform(0.0, span);
      const double spread = rng.uniform(span / 4.0, span / 2.0);
      for (Index i = 0; i < signal_dim; ++i) {
        const double u = (static_cast<double>(i) - center) / spread;
        atoms(i, j) += shape.background_level * std::exp(-0.5 * u * u);
      }
    }
    for (int p = 0; p < peaks_per_atom; ++p) {
      // Peaks sit on wavenumber bins.
      const double center = static_cast<double>(rng.below(static_cast<std::uint64_t>(signal_dim)));
      const double width = rng.uniform(shape.min_width, shape.max_width);
      const double height = p == 0 ? 1.0 : rng.uniform(0.2, 1.0);
      for (Index i = 0; i < signal_dim; ++i) {
        const double u = (static_cast<double>(i) - center) / width;
        atoms(i, j) += height / (1.0 + u * u);
      }
    }
  }
  return validate_dictionary(normalize_columns(atoms));
}

}  // namespace deepmp
