#include <doctest.h>

#include <cmath>
#include <numeric>

#include "deepmp/datagen.hpp"
#include "deepmp/metrics.hpp"
#include "deepmp/network.hpp"
#include "deepmp/sweep.hpp"
#include "oracles.hpp"

using namespace deepmp;

TEST_CASE("hamming_complement") {
  CHECK(hamming_complement({1, 2, 3}, {1, 2, 3}, 3) == 1.0);
  CHECK(hamming_complement({4, 5, 6}, {1, 2, 3}, 3) == 0.0);
  CHECK(hamming_complement({1, 2, 7}, {1, 2, 3}, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  // Re-selected atoms count once.
  CHECK(hamming_complement({1, 1, 1}, {1, 2, 3}, 3) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(hamming_complement({1}, {1}, 0), Error);
}

TEST_CASE("raw indicator sum is exposed for auditing") {
  // N = 10, k = 3, two of three atoms found: 6 matching zeros + 2 matching
  // ones contribute 1 each, 2 mismatches contribute 1 - 1/3 each.
  CHECK(hamming_complement_raw({1, 2, 7}, {1, 2, 3}, 3, 10) ==
        doctest::Approx(8.0 + 2.0 * (2.0 / 3.0)));
}

TEST_CASE("hamming_complement matches set enumeration and is relabeling invariant") {
  Rng rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 12;
    const int k = 1 + static_cast<int>(rng.below(5));
    std::vector<Index> truth;
    for (auto i : rng.choose_distinct(n, k)) truth.push_back(i);
    std::vector<Index> acquired;
    const int steps = static_cast<int>(rng.below(7));
    for (int s = 0; s < steps; ++s) acquired.push_back(static_cast<Index>(rng.below(n)));
    const double h = hamming_complement(SupportSet(acquired), SupportSet(truth), k);
    CHECK(std::abs(h - oracle::brute_hamming(acquired, truth, k)) < 1e-12);
    CHECK((h >= 0.0 && h <= 1.0));

    std::vector<Index> perm(n);
    std::iota(perm.begin(), perm.end(), Index{0});
    rng.shuffle(perm);
    std::vector<Index> pa, pt;
    for (Index i : acquired) pa.push_back(perm[static_cast<std::size_t>(i)]);
    for (Index i : truth) pt.push_back(perm[static_cast<std::size_t>(i)]);
    CHECK(hamming_complement(SupportSet(pa), SupportSet(pt), k) == h);
  }
}

TEST_CASE("epsilon_error") {
  const Dictionary d = generate_synthetic_dictionary(8, 20, 3);
  const auto samples = sample_mixture(d, {3, 20, 5});
  std::vector<SparseCode> truth, zero;
  for (const auto& s : samples) {
    truth.push_back(s.true_code(20));
    zero.push_back(SparseCode::Zero(20));
  }
  CHECK(epsilon_error(d, samples, truth) < 1e-9);
  CHECK(epsilon_error(d, samples, zero) == 1.0);

  // Single sample, hand-computed: y = phi_0 + phi_1, x = phi_0 only.
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 3);
  a.col(2) = Eigen::Vector2d(0.6, 0.8);
  const Dictionary small = validate_dictionary(a);
  Sample s;
  s.signal = Eigen::Vector2d(1.0, 1.0);
  s.true_support = SupportSet{0, 1};
  s.true_coeffs = {1.0, 1.0};
  SparseCode x = SparseCode::Zero(3);
  x(0) = 1.0;
  CHECK(epsilon_error(small, std::vector<Sample>{s}, std::vector<SparseCode>{x}) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

  Sample zero_signal = s;
  zero_signal.signal.setZero();
  try {
    epsilon_error(small, std::vector<Sample>{zero_signal}, std::vector<SparseCode>{x});
    FAIL("expected ZeroSignal");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroSignal);
  }
}

TEST_CASE("coherence") {
  CHECK(coherence(Eigen::MatrixXd::Identity(4, 4)) == 0.0);
  Eigen::MatrixXd dup(3, 3);
  dup << 1, 0, 1,
         2, 1, 2,
         0, 0, 0;
  CHECK(coherence(dup) == doctest::Approx(1.0).epsilon(1e-15));

  Rng rng(10);
  const Eigen::MatrixXd m = oracle::random_gaussian(10, 20, rng);
  CHECK(std::abs(coherence(m) - oracle::brute_coherence(m)) < 1e-12);

  Eigen::MatrixXd zero_col = Eigen::MatrixXd::Identity(3, 3);
  zero_col.col(1).setZero();
  try {
    coherence(zero_col);
    FAIL("expected ZeroColumn");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroColumn);
  }
}

TEST_CASE("coherence_ecdf") {
  const auto grid = uniform_grid(200);
  CHECK(grid.size() == 200);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 1.0);

  for (const auto& [t, f] : coherence_ecdf(Eigen::MatrixXd::Identity(5, 5), grid)) CHECK(f == 1.0);

  const Eigen::MatrixXd same = Eigen::MatrixXd::Constant(3, 4, 0.3);
  for (const auto& [t, f] : coherence_ecdf(same, grid)) CHECK(f == (t < 1.0 ? 0.0 : 1.0));

  Rng rng(2);
  const Eigen::MatrixXd m = oracle::random_gaussian(6, 5, rng);
  const auto curve = coherence_ecdf(m, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(curve[i].second - oracle::brute_ecdf(m, grid[i])) < 1e-12);
    if (i) CHECK(curve[i].second >= curve[i - 1].second);
  }
  CHECK(curve.back().second == 1.0);
}

TEST_CASE("run_sweep") {
  const Dictionary d = generate_synthetic_dictionary(30, 200, 1);
  SweepOptions opts;
  opts.k_min = 1;
  opts.k_max = 2;
  opts.z = 200;
  opts.seed = 5;

  std::map<int, UnfoldedModel> models;
  for (int k = 1; k <= 2; ++k) models.emplace(k, init_from_dictionary(d, k, opts.proj));

  const auto reports = run_sweep(d, {SolverKind::NNMP, SolverKind::NNOMP, SolverKind::DeepMP}, models, opts);
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].recovery.at(1) == 1.0);
  CHECK(reports[1].recovery.at(1) == 1.0);

  // Untrained DeepMP reproduces NNMP exactly.
  MetricsReport deep = reports[2];
  deep.solver = "nnmp";
  CHECK(deep == reports[0]);

  CHECK(run_sweep(d, {SolverKind::NNMP, SolverKind::NNOMP, SolverKind::DeepMP}, models, opts) == reports);

  for (const auto& r : reports) {
    for (const auto& [k, v] : r.recovery) CHECK((v >= 0.0 && v <= 1.0));
    for (const auto& [k, v] : r.epsilon) CHECK(v >= 0.0);
  }

  const std::string csv = reports_to_csv(reports);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 2);
  CHECK(csv.rfind("solver,k,recovery,epsilon\n", 0) == 0);

  models.erase(2);
  try {
    run_sweep(d, {SolverKind::DeepMP}, models, opts);
    FAIL("expected MissingModel");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingModel);
  }
}

TEST_CASE("test and training mixture streams are disjoint") {
  for (int k = 1; k <= 5; ++k) CHECK(train_seed(1, k) != test_seed(1, k));
}

TEST_CASE("ECDF counts pairs at the threshold") {
  // Pair coherences are exactly {0, 1, 0}.
  Eigen::MatrixXd m(2, 3);
  m << 1, 0, 1,
       0, 1, 0;
  const auto e = coherence_ecdf(m, {0.0, 0.5, 1.0});
  CHECK(e[0].second == 2.0 / 3.0);
  CHECK(e[1].second == 2.0 / 3.0);
  CHECK(e[2].second == 1.0);
}
