#include "deepmp/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace deepmp {

namespace fs = std::filesystem;

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_number(std::string_view cell, double& out) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return res.ec == std::errc() && res.ptr == cell.data() + cell.size();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

Eigen::MatrixXd parse_matrix_csv(const std::string& text, const std::string& origin) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    std::vector<double> row(cells.size());
    std::size_t bad = cells.size();
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_number(cells[c], row[c])) {
        bad = c;
        break;
      }
    }
    if (bad != cells.size()) {
      if (first) {
        first = false;
        continue;
      }
      throw Error(Errc::ParseError, origin + ": non-numeric cell at line " +
                                        std::to_string(line_no) + ", column " +
                                        std::to_string(bad + 1) + ": '" +
                                        std::string(trim(cells[bad])) + "'");
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(Errc::ParseError, origin + ": line " + std::to_string(line_no) + " has " +
                                        std::to_string(row.size()) + " columns, expected " +
                                        std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(Errc::EmptyLibrary, origin + ": no numeric rows");
  Eigen::MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  out << contents;
  if (!out) throw Error(Errc::IoError, "write failed for " + path);
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  return parse_matrix_csv(read_file(path), path);
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::string text;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) text += ',';
      text += format_double(m(i, j));
    }
    text += '\n';
  }
  write_file(path, text);
}

Dictionary load_dictionary_csv(const std::string& path) {
  return validate_dictionary(read_matrix_csv(path));
}

namespace {

std::string shard_name(const std::string& stem, Index shard) {
  std::ostringstream ss;
  ss << stem << "_shard" << std::setw(3) << std::setfill('0') << shard << ".csv";
  return ss.str();
}

}  // namespace

DatasetMeta write_dataset(const std::string& dir, const std::string& stem, const Dictionary& dict,
                          const MixtureConfig& cfg) {
  if (cfg.num_samples < 1) throw Error(Errc::EmptyInput, "num_samples must be >= 1");
  fs::create_directories(dir);
  DatasetMeta meta;
  meta.signal_dim = dict.signal_dim();
  meta.num_atoms = dict.num_atoms();
  meta.k = cfg.sparsity;
  meta.seed = cfg.seed;
  meta.num_samples = cfg.num_samples;

  const Index shards = (cfg.num_samples + kMixtureShardSize - 1) / kMixtureShardSize;
  for (Index s = 0; s < shards; ++s) {
    std::string text;
    for (const auto& m : sample_mixture_shard(dict.num_atoms(), cfg, s)) {
      const Sample sample = realize(dict, m);
      for (std::size_t l = 0; l < m.support.size(); ++l) {
        if (l) text += ',';
        text += std::to_string(m.support[l]) + ':' + format_double(m.coeffs[l]);
      }
      for (Index i = 0; i < sample.signal.size(); ++i) text += ',' + format_double(sample.signal(i));
      text += '\n';
    }
    const std::string name = shard_name(stem, s);
    write_file((fs::path(dir) / name).string(), text);
    meta.shards.push_back(name);
  }

  nlohmann::ordered_json j;
  j["signal_dim"] = meta.signal_dim;
  j["num_atoms"] = meta.num_atoms;
  j["k"] = meta.k;
  j["seed"] = meta.seed;
  j["num_samples"] = meta.num_samples;
  j["coefficient_law"] = meta.coefficient_law;
  j["shards"] = meta.shards;
  write_file((fs::path(dir) / (stem + ".json")).string(), j.dump(2) + "\n");
  return meta;
}

DatasetMeta read_dataset_meta(const std::string& sidecar_path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(sidecar_path));
    DatasetMeta meta;
    meta.signal_dim = j.at("signal_dim").get<Index>();
    meta.num_atoms = j.at("num_atoms").get<Index>();
    meta.k = j.at("k").get<int>();
    meta.seed = j.at("seed").get<std::uint64_t>();
    meta.num_samples = j.at("num_samples").get<Index>();
    meta.coefficient_law = j.value("coefficient_law", meta.coefficient_law);
    meta.shards = j.at("shards").get<std::vector<std::string>>();
    return meta;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, sidecar_path + ": " + e.what());
  }
}

std::vector<Mixture> read_dataset_mixtures(const std::string& sidecar_path) {
  const DatasetMeta meta = read_dataset_meta(sidecar_path);
  const fs::path base = fs::path(sidecar_path).parent_path();
  std::vector<Mixture> out;
  out.reserve(static_cast<std::size_t>(meta.num_samples));
  for (const auto& shard : meta.shards) {
    const std::string path = (base / shard).string();
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      const auto cells = split(line, ',');
      if (cells.size() != static_cast<std::size_t>(meta.k + meta.signal_dim)) {
        throw Error(Errc::ParseError, path + ": line " + std::to_string(line_no) +
                                          " has the wrong number of cells");
      }
      Mixture m;
      for (int l = 0; l < meta.k; ++l) {
        const auto cell = trim(cells[static_cast<std::size_t>(l)]);
        const auto colon = cell.find(':');
        double idx = 0.0;
        double coeff = 0.0;
        if (colon == std::string_view::npos || !parse_number(cell.substr(0, colon), idx) ||
            !parse_number(cell.substr(colon + 1), coeff) || idx < 0 ||
            idx >= static_cast<double>(meta.num_atoms)) {
          throw Error(Errc::ParseError, path + ": bad index:coefficient cell at line " +
                                            std::to_string(line_no) + ", column " +
                                            std::to_string(l + 1));
        }
        m.support.push_back(static_cast<Index>(idx));
        m.coeffs.push_back(coeff);
      }
      out.push_back(std::move(m));
    }
  }
  if (static_cast<Index>(out.size()) != meta.num_samples) {
    throw Error(Errc::ParseError, sidecar_path + ": expected " + std::to_string(meta.num_samples) +
                                      " samples, found " + std::to_string(out.size()));
  }
  return out;
}

std::string git_blob_hash(const std::string& path) {
  const std::string body = read_file(path);
  const std::string header = "blob " + std::to_string(body.size()) + '\0';
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
  EVP_DigestUpdate(ctx, header.data(), header.size());
  EVP_DigestUpdate(ctx, body.data(), body.size());
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i)
    ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return ss.str();
}

}  // namespace deepmp
