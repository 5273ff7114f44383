#include "deepmp/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <sstream>

#include "deepmp/io.hpp"

namespace deepmp {

namespace {

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw Error(Errc::BadConfig, "cannot parse '" + text + "' for " + key);
  }
  return value;
}

std::string source_name(DictionarySource s) {
  switch (s) {
    case DictionarySource::Synthetic: return "synthetic";
    case DictionarySource::Raman: return "raman";
    case DictionarySource::Surrogate: return "surrogate";
  }
  return "synthetic";
}

std::string projection_name(ProjectionMode p) {
  return p == ProjectionMode::PositiveOrthant ? "positive_orthant" : "identity";
}

Index scaled(Index n, double scale) {
  return std::max<Index>(1, static_cast<Index>(std::llround(static_cast<double>(n) * scale)));
}

}  // namespace

Index RunConfig::effective_signal_dim() const {
  if (signal_dim) return *signal_dim;
  return source == DictionarySource::Surrogate ? 503 : 30;
}

Index RunConfig::effective_num_atoms() const {
  if (num_atoms) return *num_atoms;
  return source == DictionarySource::Surrogate ? 2521 : 200;
}

int RunConfig::effective_epochs() const {
  if (epochs) return *epochs;
  return source == DictionarySource::Synthetic ? 20 : 30;
}

Index RunConfig::scaled_train_samples() const { return scaled(num_train_samples, scale); }
Index RunConfig::scaled_z_test() const { return scaled(z_test, scale); }

TrainOptions RunConfig::train_options() const {
  TrainOptions o;
  o.epochs = effective_epochs();
  o.batch_size = batch_size;
  o.hyper = hyper;
  o.val_fraction = val_fraction;
  o.seed = seed;
  return o;
}

SweepOptions RunConfig::sweep_options() const {
  SweepOptions o;
  o.k_min = k_min;
  o.k_max = k_max;
  o.z = scaled_z_test();
  o.seed = seed;
  o.proj = proj;
  o.ecdf_points = ecdf_points;
  return o;
}

void RunConfig::validate() const {
  if (k_min < 1 || k_max < k_min) throw Error(Errc::BadConfig, "invalid k range");
  if (!(scale > 0.0)) throw Error(Errc::BadConfig, "scale must be > 0");
  if (batch_size < 1) throw Error(Errc::BadConfig, "batch_size must be >= 1");
  if (num_train_samples < 1 || z_test < 1) throw Error(Errc::BadConfig, "sample counts must be >= 1");
  if (peaks_per_atom < 1) throw Error(Errc::BadConfig, "peaks_per_atom must be >= 1");
  if (ecdf_points < 2) throw Error(Errc::BadConfig, "ecdf_points must be >= 2");
  if (solvers.empty()) throw Error(Errc::BadConfig, "no solvers selected");
}

std::string RunConfig::to_ini() const {
  std::ostringstream ss;
  ss << "[run]\n"
     << "seed = " << seed << "\n"
     << "scale = " << format_double(scale) << "\n"
     << "out = " << out_dir << "\n\n"
     << "[dictionary]\n"
     << "source = " << source_name(source) << "\n"
     << "signal_dim = " << effective_signal_dim() << "\n"
     << "num_atoms = " << effective_num_atoms() << "\n";
  if (!raman_path.empty()) ss << "path = " << raman_path << "\n";
  ss << "peaks_per_atom = " << peaks_per_atom << "\n\n"
     << "[data]\n"
     << "k_min = " << k_min << "\n"
     << "k_max = " << k_max << "\n"
     << "num_train_samples = " << num_train_samples << "\n"
     << "z_test = " << z_test << "\n\n"
     << "[train]\n"
     << "epochs = " << effective_epochs() << "\n"
     << "batch_size = " << batch_size << "\n"
     << "lr = " << format_double(hyper.lr) << "\n"
     << "final_lr = " << format_double(hyper.final_lr) << "\n"
     << "beta1 = " << format_double(hyper.beta1) << "\n"
     << "beta2 = " << format_double(hyper.beta2) << "\n"
     << "gamma = " << format_double(hyper.gamma) << "\n"
     << "epsilon = " << format_double(hyper.epsilon) << "\n"
     << "val_fraction = " << format_double(val_fraction) << "\n"
     << "projection = " << projection_name(proj) << "\n\n"
     << "[eval]\n"
     << "solvers = ";
  for (std::size_t i = 0; i < solvers.size(); ++i) ss << (i ? "," : "") << to_string(solvers[i]);
  ss << "\n"
     << "ecdf_points = " << ecdf_points << "\n";
  return ss.str();
}

void apply_setting(RunConfig& cfg, const std::string& section, const std::string& key,
                   const std::string& value) {
  const std::string name = section + "." + key;
  if (name == "run.seed") cfg.seed = parse_value<std::uint64_t>(name, value);
  else if (name == "run.scale") {
    cfg.scale = parse_value<double>(name, value);
  } else if (name == "run.out") cfg.out_dir = value;
  else if (name == "dictionary.source") {
    if (value == "synthetic") cfg.source = DictionarySource::Synthetic;
    else if (value == "raman") cfg.source = DictionarySource::Raman;
    else if (value == "surrogate") cfg.source = DictionarySource::Surrogate;
    else throw Error(Errc::BadConfig, "unknown dictionary source '" + value + "'");
  } else if (name == "dictionary.signal_dim") cfg.signal_dim = parse_value<Index>(name, value);
  else if (name == "dictionary.num_atoms") cfg.num_atoms = parse_value<Index>(name, value);
  else if (name == "dictionary.path") cfg.raman_path = value;
  else if (name == "dictionary.peaks_per_atom") cfg.peaks_per_atom = parse_value<int>(name, value);
  else if (name == "data.k_min") cfg.k_min = parse_value<int>(name, value);
  else if (name == "data.k_max") cfg.k_max = parse_value<int>(name, value);
  else if (name == "data.num_train_samples") cfg.num_train_samples = parse_value<Index>(name, value);
  else if (name == "data.z_test") cfg.z_test = parse_value<Index>(name, value);
  else if (name == "train.epochs") cfg.epochs = parse_value<int>(name, value);
  else if (name == "train.batch_size") cfg.batch_size = parse_value<Index>(name, value);
  else if (name == "train.lr") cfg.hyper.lr = parse_value<double>(name, value);
  else if (name == "train.final_lr") cfg.hyper.final_lr = parse_value<double>(name, value);
  else if (name == "train.beta1") cfg.hyper.beta1 = parse_value<double>(name, value);
  else if (name == "train.beta2") cfg.hyper.beta2 = parse_value<double>(name, value);
  else if (name == "train.gamma") cfg.hyper.gamma = parse_value<double>(name, value);
  else if (name == "train.epsilon") cfg.hyper.epsilon = parse_value<double>(name, value);
  else if (name == "train.val_fraction") cfg.val_fraction = parse_value<double>(name, value);
  else if (name == "train.projection") {
    if (value == "positive_orthant") cfg.proj = ProjectionMode::PositiveOrthant;
    else if (value == "identity") cfg.proj = ProjectionMode::Identity;
    else throw Error(Errc::BadConfig, "unknown projection '" + value + "'");
  } else if (name == "eval.solvers") {
    cfg.solvers.clear();
    std::istringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item.erase(0, item.find_first_not_of(" \t"));
      item.erase(item.find_last_not_of(" \t") + 1);
      if (!item.empty()) cfg.solvers.push_back(parse_solver(item));
    }
  } else if (name == "eval.ecdf_points") cfg.ecdf_points = parse_value<int>(name, value);
  else throw Error(Errc::BadConfig, "unknown config key '" + name + "'");
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw Error(Errc::BadConfig, "override must look like section.key=value: " + assignment);
  }
  apply_setting(cfg, assignment.substr(0, dot), assignment.substr(dot + 1, eq - dot - 1),
                assignment.substr(eq + 1));
}

RunConfig parse_config_text(const std::string& ini) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(ini);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(Errc::BadConfig, e.what());
  }
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw Error(Errc::BadConfig, "key '" + section + "' outside a section");
    for (const auto& [key, value] : body) apply_setting(cfg, section, key, value.get_value<std::string>());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error&) {
    throw Error(Errc::BadConfig, "cannot read config " + path);
  }
  return parse_config_text(text);
}

}  // namespace deepmp
