#pragma once

#include <string>

#include "deepmp/config.hpp"

namespace deepmp {

// Each command reads from and writes into cfg.out_dir and leaves a
// manifest_<command>.json with the config echo and git blob hashes of its
// inputs and outputs.

/// dictionary.csv + dictionary.json
void cmd_gen_dict(const RunConfig& cfg);
/// data/k<k>/train_shardNNN.csv + data/k<k>/train.json for every k
void cmd_gen_data(const RunConfig& cfg);
/// models/model_k<k>.dmp + models/train_log_k<k>.csv for every k. Uses the
/// gen-data shards when present, otherwise generates the same mixtures.
void cmd_train(const RunConfig& cfg);
/// metrics.csv, metrics.json and the ECDF files
void cmd_eval(const RunConfig& cfg);
/// ecdf/dictionary.csv, ecdf/deepmp_k<k>_layer<l>.csv for models present,
/// and ecdf/summary.csv
void cmd_ecdf(const RunConfig& cfg);

std::string dictionary_path(const RunConfig& cfg);
std::string model_path(const RunConfig& cfg, int k);

}  // namespace deepmp
