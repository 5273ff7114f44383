#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "deepmp/core.hpp"
#include "deepmp/datagen.hpp"

namespace deepmp {

/// Shortest round-trip text form of a double ("%.17g").
std::string format_double(double v);

/// Comma-separated matrix, one line per row. A first line that does not parse
/// as numbers is treated as a header and skipped. Errors name the 1-based
/// line and column of the offending cell.
Eigen::MatrixXd read_matrix_csv(const std::string& path);
Eigen::MatrixXd parse_matrix_csv(const std::string& text, const std::string& origin = "<text>");
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);

/// Reads a CSV dictionary and validates it as is (no normalization).
Dictionary load_dictionary_csv(const std::string& path);

struct DatasetMeta {
  Index signal_dim = 0;
  Index num_atoms = 0;
  int k = 0;
  std::uint64_t seed = 0;
  Index num_samples = 0;
  std::string coefficient_law = "uniform(0,1]";
  std::vector<std::string> shards;
};

/// Writes `<dir>/<stem>_shardNNN.csv` files and a `<dir>/<stem>.json`
/// sidecar. Each row holds k "index:coefficient" cells followed by the
/// signal values. Shards are generated and written one at a time.
DatasetMeta write_dataset(const std::string& dir, const std::string& stem, const Dictionary& dict,
                          const MixtureConfig& cfg);

DatasetMeta read_dataset_meta(const std::string& sidecar_path);

/// Reads back the ground-truth mixtures (signals are re-synthesized by the
/// caller as needed). Shard paths are resolved relative to the sidecar.
std::vector<Mixture> read_dataset_mixtures(const std::string& sidecar_path);

/// Git blob id: SHA-1 over "blob <size>\0" followed by the file bytes.
std::string git_blob_hash(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace deepmp
