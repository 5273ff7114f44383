#include "deepmp/commands.hpp"

#include <filesystem>
#include <iostream>
#include <map>

#include <json.hpp>

#include "deepmp/datagen.hpp"
#include "deepmp/io.hpp"
#include "deepmp/metrics.hpp"
#include "deepmp/network.hpp"
#include "deepmp/sweep.hpp"
#include "deepmp/training.hpp"

namespace deepmp {

namespace fs = std::filesystem;

namespace {

std::string join(const RunConfig& cfg, const std::string& rel) {
  return (fs::path(cfg.out_dir) / rel).string();
}

class Manifest {
 public:
  Manifest(const RunConfig& cfg, std::string command) : cfg_(cfg), command_(std::move(command)) {}

  void input(const std::string& rel) { inputs_[rel] = git_blob_hash(join(cfg_, rel)); }
  void external_input(const std::string& path) { inputs_[path] = git_blob_hash(path); }
  void output(const std::string& rel) { outputs_[rel] = git_blob_hash(join(cfg_, rel)); }

  void write() const {
    nlohmann::ordered_json j;
    j["command"] = command_;
    j["config"] = cfg_.to_ini();
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    write_file(join(cfg_, "manifest_" + command_ + ".json"), j.dump(2) + "\n");
  }

 private:
  const RunConfig& cfg_;
  std::string command_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
};

std::string data_sidecar_rel(int k) { return "data/k" + std::to_string(k) + "/train.json"; }
std::string model_rel(int k) { return "models/model_k" + std::to_string(k) + ".dmp"; }
std::string log_rel(int k) { return "models/train_log_k" + std::to_string(k) + ".csv"; }

Dictionary load_run_dictionary(const RunConfig& cfg, Manifest& manifest) {
  const std::string path = dictionary_path(cfg);
  if (!fs::exists(path)) {
    throw Error(Errc::ParseError, "dictionary " + path + " not found; run gen-dict first");
  }
  Dictionary dict = load_dictionary_csv(path);
  manifest.input("dictionary.csv");
  return dict;
}

std::map<int, UnfoldedModel> load_models(const RunConfig& cfg, const Dictionary& dict,
                                         Manifest& manifest, bool required) {
  std::map<int, UnfoldedModel> models;
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    const std::string path = model_path(cfg, k);
    if (!fs::exists(path)) {
      if (required) throw Error(Errc::MissingModel, "missing model " + path + "; run train first");
      continue;
    }
    UnfoldedModel model = load_model(path);
    if (!(model.update_dict() == dict) || model.depth() != k) {
      throw Error(Errc::MissingModel, path + " does not match the run dictionary or depth " +
                                          std::to_string(k));
    }
    manifest.input(model_rel(k));
    models.emplace(k, std::move(model));
  }
  return models;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

void write_ecdfs(const RunConfig& cfg, const Dictionary& dict,
                 const std::map<int, UnfoldedModel>& models, Manifest& manifest) {
  const auto grid = uniform_grid(cfg.ecdf_points);
  const auto base = coherence_ecdf(dict.atoms(), grid);
  write_file(join(cfg, "ecdf/dictionary.csv"), ecdf_to_csv(base));
  manifest.output("ecdf/dictionary.csv");

  std::string summary = "matrix,mean_coherence,max_coherence,dominates_dictionary\n";
  const auto dict_pairs = pairwise_coherences(dict.atoms());
  summary += "dictionary," + format_double(mean_of(dict_pairs)) + ',' +
             format_double(dict_pairs.back()) + ",1\n";
  for (const auto& [k, model] : models) {
    for (int l = 0; l < model.depth(); ++l) {
      const auto& w = model.selection_weights()[static_cast<std::size_t>(l)];
      const auto curve = coherence_ecdf(w, grid);
      const std::string rel =
          "ecdf/deepmp_k" + std::to_string(k) + "_layer" + std::to_string(l) + ".csv";
      write_file(join(cfg, rel), ecdf_to_csv(curve));
      manifest.output(rel);
      bool dominates = true;
      for (std::size_t i = 0; i < curve.size(); ++i)
        if (curve[i].second < base[i].second) dominates = false;
      const auto pairs = pairwise_coherences(w);
      summary += "deepmp_k" + std::to_string(k) + "_layer" + std::to_string(l) + ',' +
                 format_double(mean_of(pairs)) + ',' + format_double(pairs.back()) + ',' +
                 (dominates ? "1" : "0") + '\n';
    }
  }
  write_file(join(cfg, "ecdf/summary.csv"), summary);
  manifest.output("ecdf/summary.csv");
}

}  // namespace

std::string dictionary_path(const RunConfig& cfg) { return join(cfg, "dictionary.csv"); }
std::string model_path(const RunConfig& cfg, int k) { return join(cfg, model_rel(k)); }

void cmd_gen_dict(const RunConfig& cfg) {
  cfg.validate();
  Manifest manifest(cfg, "gen-dict");
  nlohmann::ordered_json meta;
  Eigen::MatrixXd atoms;
  switch (cfg.source) {
    case DictionarySource::Synthetic:
      atoms = generate_synthetic_dictionary(cfg.effective_signal_dim(), cfg.effective_num_atoms(),
                                            cfg.seed)
                  .atoms();
      meta["source"] = "synthetic";
      break;
    case DictionarySource::Surrogate:
      atoms = generate_raman_surrogate(cfg.effective_signal_dim(), cfg.effective_num_atoms(),
                                       cfg.peaks_per_atom, cfg.seed)
                  .atoms();
      meta["source"] = "surrogate";
      meta["peaks_per_atom"] = cfg.peaks_per_atom;
      break;
    case DictionarySource::Raman: {
      if (cfg.raman_path.empty()) throw Error(Errc::ParseError, "dictionary.path is not set");
      RamanLibrary lib = load_raman_library(cfg.raman_path);
      atoms = lib.dictionary.atoms();
      meta["source"] = "raman";
      meta["path"] = cfg.raman_path;
      meta["clamped_entries"] = lib.clamped_entries;
      if (lib.clamped_entries > 0) {
        std::cerr << "clamped " << lib.clamped_entries << " negative readings to zero\n";
      }
      manifest.external_input(cfg.raman_path);
      break;
    }
  }
  meta["signal_dim"] = atoms.rows();
  meta["num_atoms"] = atoms.cols();
  meta["seed"] = cfg.seed;
  fs::create_directories(cfg.out_dir);
  write_matrix_csv(dictionary_path(cfg), atoms);
  write_file(join(cfg, "dictionary.json"), meta.dump(2) + "\n");
  manifest.output("dictionary.csv");
  manifest.output("dictionary.json");
  manifest.write();
}

void cmd_gen_data(const RunConfig& cfg) {
  cfg.validate();
  Manifest manifest(cfg, "gen-data");
  const Dictionary dict = load_run_dictionary(cfg, manifest);
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    const std::string dir = join(cfg, "data/k" + std::to_string(k));
    const DatasetMeta meta = write_dataset(
        dir, "train", dict, MixtureConfig{k, cfg.scaled_train_samples(), train_seed(cfg.seed, k)});
    for (const auto& shard : meta.shards) manifest.output("data/k" + std::to_string(k) + "/" + shard);
    manifest.output(data_sidecar_rel(k));
  }
  manifest.write();
}

void cmd_train(const RunConfig& cfg) {
  cfg.validate();
  Manifest manifest(cfg, "train");
  const Dictionary dict = load_run_dictionary(cfg, manifest);
  fs::create_directories(join(cfg, "models"));
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    std::vector<Mixture> mixtures;
    const std::string sidecar = join(cfg, data_sidecar_rel(k));
    const MixtureConfig mix{k, cfg.scaled_train_samples(), train_seed(cfg.seed, k)};
    if (fs::exists(sidecar)) {
      const DatasetMeta meta = read_dataset_meta(sidecar);
      if (meta.signal_dim != dict.signal_dim() || meta.num_atoms != dict.num_atoms() ||
          meta.k != k) {
        throw Error(Errc::ParseError, sidecar + " does not match the dictionary or k");
      }
      mixtures = read_dataset_mixtures(sidecar);
      manifest.input(data_sidecar_rel(k));
    } else {
      mixtures = sample_mixture_specs(dict.num_atoms(), mix);
    }

    std::string log = "epoch,mean_loss,val_recovery\n";
    const TrainResult result =
        train_deepmp(dict, k, cfg.proj, mixtures, cfg.train_options(), [&](const EpochLog& row) {
          std::cerr << "k=" << k << " epoch " << row.epoch << " loss " << row.mean_loss
                    << " val_recovery " << row.val_recovery << "\n";
        });
    for (const auto& row : result.log) {
      log += std::to_string(row.epoch) + ',' + format_double(row.mean_loss) + ',' +
             format_double(row.val_recovery) + '\n';
    }
    save_model(model_path(cfg, k), result.model);
    write_file(join(cfg, log_rel(k)), log);
    manifest.output(model_rel(k));
    manifest.output(log_rel(k));
  }
  manifest.write();
}

void cmd_eval(const RunConfig& cfg) {
  cfg.validate();
  Manifest manifest(cfg, "eval");
  const Dictionary dict = load_run_dictionary(cfg, manifest);
  bool needs_models = false;
  for (SolverKind s : cfg.solvers) needs_models |= s == SolverKind::DeepMP;
  const auto models = load_models(cfg, dict, manifest, needs_models);

  const auto reports = run_sweep(dict, cfg.solvers, models, cfg.sweep_options());
  write_file(join(cfg, "metrics.csv"), reports_to_csv(reports));
  write_file(join(cfg, "metrics.json"), reports_to_json(reports));
  manifest.output("metrics.csv");
  manifest.output("metrics.json");
  write_ecdfs(cfg, dict, models, manifest);
  manifest.write();
}

void cmd_ecdf(const RunConfig& cfg) {
  cfg.validate();
  Manifest manifest(cfg, "ecdf");
  const Dictionary dict = load_run_dictionary(cfg, manifest);
  write_ecdfs(cfg, dict, load_models(cfg, dict, manifest, false), manifest);
  manifest.write();
}

}  // namespace deepmp
