#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "deepmp/commands.hpp"
#include "deepmp/config.hpp"
#include "deepmp/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Non-negative matching pursuit and trained DeepMP sparse decomposition"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> settings;
  std::uint64_t seed = 0;
  double scale = 0.0;
  std::string out_dir;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--scale", scale, "multiplier on training and test sample counts")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--set", settings, "config override, section.key=value (repeatable)");
  };

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"gen-dict", "generate or import the dictionary"},
      {"gen-data", "write training mixtures as CSV shards"},
      {"train", "train one DeepMP model per sparsity level"},
      {"eval", "evaluate NNMP, NNOMP and DeepMP and export metrics"},
      {"ecdf", "export coherence ECDFs of the dictionary and trained layers"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    deepmp::RunConfig cfg = config_path.empty() ? deepmp::RunConfig{} : deepmp::load_config(config_path);
    for (const auto& s : settings) deepmp::apply_override(cfg, s);
    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--seed")) cfg.seed = seed;
    if (sub->count("--scale")) cfg.scale = scale;
    if (sub->count("--out")) cfg.out_dir = out_dir;
    cfg.validate();

    const std::string name = sub->get_name();
    if (name == "gen-dict") deepmp::cmd_gen_dict(cfg);
    else if (name == "gen-data") deepmp::cmd_gen_data(cfg);
    else if (name == "train") deepmp::cmd_train(cfg);
    else if (name == "eval") deepmp::cmd_eval(cfg);
    else if (name == "ecdf") deepmp::cmd_ecdf(cfg);
  } catch (const deepmp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return deepmp::is_numerical(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
