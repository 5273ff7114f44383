#include "deepmp/sweep.hpp"

#include <json.hpp>

#include "deepmp/datagen.hpp"
#include "deepmp/io.hpp"
#include "deepmp/metrics.hpp"
#include "deepmp/rng.hpp"

namespace deepmp {

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::NNMP: return "nnmp";
    case SolverKind::NNOMP: return "nnomp";
    case SolverKind::DeepMP: return "deepmp";
  }
  return "unknown";
}

SolverKind parse_solver(const std::string& name) {
  if (name == "nnmp") return SolverKind::NNMP;
  if (name == "nnomp") return SolverKind::NNOMP;
  if (name == "deepmp") return SolverKind::DeepMP;
  throw Error(Errc::BadConfig, "unknown solver '" + name + "'");
}

std::uint64_t train_seed(std::uint64_t master, int k) {
  return derive_seed(master, "train", static_cast<std::uint64_t>(k));
}

std::uint64_t test_seed(std::uint64_t master, int k) {
  return derive_seed(master, "test", static_cast<std::uint64_t>(k));
}

std::vector<Sample> test_samples(const Dictionary& dict, int k, Index z, std::uint64_t seed) {
  return sample_mixture(dict, MixtureConfig{k, z, test_seed(seed, k)});
}

std::vector<MetricsReport> run_sweep(const Dictionary& dict, const std::vector<SolverKind>& solvers,
                                     const std::map<int, UnfoldedModel>& models,
                                     const SweepOptions& opts) {
  if (opts.k_min < 1 || opts.k_max < opts.k_min) {
    throw Error(Errc::BadConfig, "invalid k range");
  }
  for (SolverKind s : solvers) {
    if (s != SolverKind::DeepMP) continue;
    for (int k = opts.k_min; k <= opts.k_max; ++k) {
      const auto it = models.find(k);
      if (it == models.end()) {
        throw Error(Errc::MissingModel, "no trained DeepMP model for k = " + std::to_string(k));
      }
      if (it->second.depth() != k) {
        throw Error(Errc::MissingModel, "model for k = " + std::to_string(k) + " has depth " +
                                            std::to_string(it->second.depth()));
      }
    }
  }

  const auto grid = uniform_grid(opts.ecdf_points);
  const auto dict_ecdf = coherence_ecdf(dict.atoms(), grid);

  std::vector<MetricsReport> reports;
  for (SolverKind s : solvers) {
    MetricsReport r;
    r.solver = to_string(s);
    r.z = opts.z;
    r.ecdf = s == SolverKind::DeepMP
                 ? coherence_ecdf(models.at(opts.k_max).selection_weights().back(), grid)
                 : dict_ecdf;
    reports.push_back(std::move(r));
  }

  for (int k = opts.k_min; k <= opts.k_max; ++k) {
    const std::vector<Sample> samples = test_samples(dict, k, opts.z, opts.seed);
    for (std::size_t si = 0; si < solvers.size(); ++si) {
      std::vector<SparseCode> codes;
      codes.reserve(samples.size());
      double recovered = 0.0;
      for (const auto& sample : samples) {
        PursuitResult res;
        switch (solvers[si]) {
          case SolverKind::NNMP: res = nnmp_solve(dict, sample.signal, k, opts.proj); break;
          case SolverKind::NNOMP: res = nnomp_solve(dict, sample.signal, k); break;
          case SolverKind::DeepMP: res = forward_infer(models.at(k), sample.signal); break;
        }
        recovered += hamming_complement(res.support, sample.true_support, k);
        codes.push_back(std::move(res.code));
      }
      reports[si].recovery[k] = recovered / static_cast<double>(samples.size());
      reports[si].epsilon[k] = epsilon_error(dict, samples, codes);
    }
  }
  return reports;
}

std::string reports_to_csv(const std::vector<MetricsReport>& reports) {
  std::string out = "solver,k,recovery,epsilon\n";
  for (const auto& r : reports) {
    for (const auto& [k, rec] : r.recovery) {
      out += r.solver + ',' + std::to_string(k) + ',' + format_double(rec) + ',' +
             format_double(r.epsilon.at(k)) + '\n';
    }
  }
  return out;
}

std::string reports_to_json(const std::vector<MetricsReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["solver"] = r.solver;
    j["z"] = r.z;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& [k, rec] : r.recovery) {
      rows.push_back({{"k", k}, {"recovery", rec}, {"epsilon", r.epsilon.at(k)}});
    }
    j["per_k"] = rows;
    nlohmann::ordered_json ecdf = nlohmann::ordered_json::array();
    for (const auto& [t, f] : r.ecdf) ecdf.push_back({t, f});
    j["ecdf"] = ecdf;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

std::string ecdf_to_csv(const std::vector<std::pair<double, double>>& ecdf) {
  std::string out = "t,ecdf\n";
  for (const auto& [t, f] : ecdf) out += format_double(t) + ',' + format_double(f) + '\n';
  return out;
}

}  // namespace deepmp
