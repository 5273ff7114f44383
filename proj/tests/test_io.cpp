#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "deepmp/datagen.hpp"
#include "deepmp/io.hpp"
#include "deepmp/rng.hpp"

using namespace deepmp;

namespace fs = std::filesystem;

TEST_CASE("format_double round-trips") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-30, 30));
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("matrix CSV") {
  const auto m = parse_matrix_csv("wavenumber_a, b\n1.5, 2\n-3e-2,4\n\n");
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(m(1, 0) == -0.03);
  CHECK_THROWS_AS(parse_matrix_csv("1,2\n3\n"), Error);
  CHECK_THROWS_AS(parse_matrix_csv("h\nx,1\n"), Error);

  const auto dir = fs::temp_directory_path() / "deepmp_io_test";
  fs::create_directories(dir);
  const Dictionary d = generate_synthetic_dictionary(7, 23, 9);
  const auto path = (dir / "dict.csv").string();
  write_matrix_csv(path, d.atoms());
  CHECK(load_dictionary_csv(path) == d);
}

TEST_CASE("dataset shards round-trip the ground truth") {
  const auto dir = fs::temp_directory_path() / "deepmp_dataset_test";
  fs::remove_all(dir);
  const Dictionary d = generate_synthetic_dictionary(6, 20, 2);
  const MixtureConfig cfg{3, 12345, 77};
  const DatasetMeta meta = write_dataset(dir.string(), "train", d, cfg);
  CHECK(meta.shards.size() == 2);

  const auto sidecar = (dir / "train.json").string();
  const DatasetMeta back = read_dataset_meta(sidecar);
  CHECK(back.signal_dim == 6);
  CHECK(back.num_atoms == 20);
  CHECK(back.k == 3);
  CHECK(back.seed == 77);
  CHECK(back.num_samples == 12345);
  CHECK(back.coefficient_law == "uniform(0,1]");
  CHECK(read_dataset_mixtures(sidecar) == sample_mixture_specs(20, cfg));

  // Row layout: k index:coefficient cells, then signal_dim values.
  const std::string first = read_file((dir / meta.shards[0]).string()).substr(0, 200);
  const auto line = first.substr(0, first.find('\n'));
  CHECK(std::count(line.begin(), line.end(), ',') == 3 + 6 - 1);
  CHECK(std::count(line.begin(), line.end(), ':') == 3);
}

TEST_CASE("git blob hash matches git's id for known content") {
  const auto path = (fs::temp_directory_path() / "deepmp_hash.txt").string();
  write_file(path, "hello\n");
  // `printf 'hello\n' | git hash-object --stdin`
  CHECK(git_blob_hash(path) == "ce013625030ba8dba906f756967f9e9ca394464a");
}
