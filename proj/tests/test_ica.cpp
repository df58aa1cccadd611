#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "icatopsis/ica.hpp"
#include "icatopsis/random.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace icatopsis;
using icatopsis::testing::matched_abs_correlations;
using icatopsis::testing::reference_mixing;
using icatopsis::testing::sample_covariance;
using icatopsis::testing::uniform_sources;

namespace {

Eigen::MatrixXd gaussian(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd x(n, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = g(rng);
  return x;
}

Eigen::MatrixXd laplacian(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> e(1.0);
  std::bernoulli_distribution sign(0.5);
  Eigen::MatrixXd x(n, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = sign(rng) ? e(rng) : -e(rng);
  return x;
}

SeparationResult run(IcaAlgorithm algorithm, const Eigen::MatrixXd& x, std::uint64_t seed) {
  IcaOptions o;
  o.seed = seed;
  return separate(MixedData(x), algorithm, o);
}

void check_postconditions(const SeparationResult& r, const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd centered = x.colwise() - r.mean;
  CHECK(((r.separating * centered).eval().array() == r.sources.array()).all());
  const Eigen::Index n = r.separating.rows();
  CHECK((r.estimated_mixing * r.separating - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(r.sources.rowwise().mean().cwiseAbs().maxCoeff() < 1e-10);
  const Eigen::MatrixXd cov = sample_covariance(r.sources);
  CHECK((cov.diagonal().array() - 1.0).abs().maxCoeff() < 1e-6);
  CHECK((cov - Eigen::MatrixXd(cov.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-6);
  const Eigen::MatrixXd rebuilt = (r.estimated_mixing * r.sources).colwise() + r.mean;
  CHECK((rebuilt - x).norm() / x.norm() < 1e-6);
}

}  // namespace

TEST_CASE("MixedData invariants and the sample floor") {
  CHECK_THROWS_AS(MixedData(Eigen::MatrixXd::Random(1, 50)), InvalidInput);
  CHECK_THROWS_AS(MixedData(Eigen::MatrixXd::Random(3, 3)), InvalidInput);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Random(2, 50);
  bad(1, 7) = INFINITY;
  CHECK_THROWS_AS(MixedData{bad}, InvalidInput);
  const MixedData few(uniform_sources(2, 19, 1));
  CHECK_THROWS_AS(fastica(few), InsufficientSamples);
  CHECK_THROWS_AS(infomax(few), InsufficientSamples);
  CHECK_NOTHROW(fastica(MixedData(uniform_sources(2, 20, 1))));
}

TEST_CASE("center_whiten produces identity covariance") {
  const MixedData white(gaussian(3, 5000, 4));
  const WhiteningResult w = center_whiten(white);
  CHECK((sample_covariance(w.whitened) - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);
  // near-orthogonal for data that is already white
  CHECK((w.whitening_matrix * w.whitening_matrix.transpose() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <
        0.1);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::MatrixXd a = Eigen::MatrixXd::Random(4, 4) + 2.0 * Eigen::MatrixXd::Identity(4, 4);
    const WhiteningResult r = center_whiten(MixedData(a * uniform_sources(4, 300, seed) + Eigen::MatrixXd::Constant(4, 300, 7.0)));
    CHECK((sample_covariance(r.whitened) - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(r.mean.minCoeff() > 5.0);
  }
}

TEST_CASE("center_whiten rejects a duplicated channel") {
  Eigen::MatrixXd x = uniform_sources(3, 200, 8);
  x.row(2) = x.row(0);
  CHECK_THROWS_AS(center_whiten(MixedData(x)), RankDeficient);
  CHECK_THROWS_AS(fastica(MixedData(x)), RankDeficient);
}

TEST_CASE("fastica recovers two uniform sources mixed by the reference matrix") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const Eigen::MatrixXd s = uniform_sources(2, 1000, 100 + seed);
    const Eigen::MatrixXd x = reference_mixing() * s;
    const SeparationResult r = run(IcaAlgorithm::FastICA, x, seed);
    CHECK(r.converged);
    CHECK(r.algorithm == IcaAlgorithm::FastICA);
    for (double c : matched_abs_correlations(s, r.sources)) CHECK(c > 0.99);
    check_postconditions(r, x);

    // gain matrix close to a signed permutation after row rescaling
    Eigen::MatrixXd g = r.separating * reference_mixing();
    for (Eigen::Index i = 0; i < 2; ++i) g.row(i) /= g.row(i).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < 2; ++i) {
      const double off = std::min(std::abs(g(i, 0)), std::abs(g(i, 1)));
      CHECK(off < 0.05);
    }
  }
}

TEST_CASE("fastica on unmixed sources returns a signed permutation") {
  // unit-variance uniform sources so the mixing estimate has unit scale
  const Eigen::MatrixXd s = std::sqrt(12.0) * (uniform_sources(2, 1000, 77).array() - 0.5);
  const SeparationResult r = run(IcaAlgorithm::FastICA, s, 3);
  const Eigen::MatrixXd a = r.estimated_mixing;
  for (Eigen::Index i = 0; i < 2; ++i) {
    int big_row = 0, big_col = 0;
    for (Eigen::Index j = 0; j < 2; ++j) {
      big_row += std::abs(a(i, j)) > 0.9;
      big_col += std::abs(a(j, i)) > 0.9;
      CHECK((std::abs(a(i, j)) > 0.9 || std::abs(a(i, j)) < 0.1));
    }
    CHECK(big_row == 1);
    CHECK(big_col == 1);
  }
}

TEST_CASE("fastica on Gaussian sources reports convergence honestly") {
  const Eigen::MatrixXd x = reference_mixing() * gaussian(2, 500, 12);
  IcaOptions o;
  o.seed = 5;
  o.max_iter = 200;
  o.restarts = 1;
  try {
    const SeparationResult r = fastica(MixedData(x), o);
    CHECK(r.converged);
    CHECK(r.iterations <= 200);
    check_postconditions(r, x);
  } catch (const NotConverged& e) {
    CHECK_FALSE(e.best().converged);
    CHECK(e.best().iterations == 200);
    check_postconditions(e.best(), x);
  }
}

TEST_CASE("fastica escapes the 45 degree saddle") {
  // At K = 100 symmetric FastICA can stop halfway between two components;
  // every result must still be a genuine separation.
  int bad = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Eigen::MatrixXd s = uniform_sources(2, 100, 5000 + seed);
    const SeparationResult r = run(IcaAlgorithm::FastICA, reference_mixing() * s, seed);
    const auto c = matched_abs_correlations(s, r.sources);
    if (std::min(c[0], c[1]) < 0.8) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("separation is deterministic for a fixed seed") {
  const Eigen::MatrixXd x = reference_mixing() * uniform_sources(2, 400, 31);
  for (IcaAlgorithm alg : {IcaAlgorithm::FastICA, IcaAlgorithm::InfomaxExtended}) {
    const SeparationResult a = run(alg, x, 17);
    const SeparationResult b = run(alg, x, 17);
    CHECK(a.separating == b.separating);
    CHECK(a.sources == b.sources);
    CHECK(a.iterations == b.iterations);
  }
}

TEST_CASE("extended infomax recovers uniform sources") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const Eigen::MatrixXd s = uniform_sources(2, 1000, 200 + seed);
    const Eigen::MatrixXd x = reference_mixing() * s;
    const SeparationResult r = run(IcaAlgorithm::InfomaxExtended, x, seed);
    CHECK(r.converged);
    for (double c : matched_abs_correlations(s, r.sources)) CHECK(c > 0.95);
    check_postconditions(r, x);
  }
}

TEST_CASE("logistic infomax recovers Laplacian sources") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Eigen::MatrixXd s = laplacian(2, 2000, 300 + seed);
    const Eigen::MatrixXd x = reference_mixing() * s;
    const SeparationResult r = run(IcaAlgorithm::InfomaxLogistic, x, seed);
    CHECK(r.converged);
    CHECK(r.algorithm == IcaAlgorithm::InfomaxLogistic);
    for (double c : matched_abs_correlations(s, r.sources)) CHECK(c > 0.95);
  }
}

TEST_CASE("infomax with zero learning rate stays at its initialization") {
  const Eigen::MatrixXd x = reference_mixing() * uniform_sources(2, 300, 41);
  IcaOptions o;
  o.seed = 23;
  o.learning_rate = 0.0;
  const WhiteningResult white = center_whiten(MixedData(x));
  Rng rng(derive_seed(23, {0}));
  const Eigen::MatrixXd init = random_orthogonal(2, rng) * white.whitening_matrix;
  try {
    infomax(MixedData(x), o);
    FAIL("expected NotConverged");
  } catch (const NotConverged& e) {
    CHECK_FALSE(e.best().converged);
    CHECK(e.best().separating == init);
  }
}

TEST_CASE("estimated_mixing inverts the separating matrix") {
  CHECK(estimated_mixing(Eigen::MatrixXd::Identity(3, 3)) == Eigen::MatrixXd::Identity(3, 3));
  const Eigen::MatrixXd d = Eigen::Vector2d(2, 4).asDiagonal();
  CHECK(estimated_mixing(d).isApprox(Eigen::MatrixXd(Eigen::Vector2d(0.5, 0.25).asDiagonal()), 1e-15));
  std::srand(3);
  for (int i = 0; i < 50; ++i) {
    const Eigen::MatrixXd b = Eigen::MatrixXd::Random(4, 4) + 3.0 * Eigen::MatrixXd::Identity(4, 4);
    CHECK((estimated_mixing(b) * b - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-8);
  }
  CHECK_THROWS_AS(estimated_mixing(Eigen::MatrixXd::Zero(2, 2)), SingularMatrix);
  CHECK_THROWS_AS(estimated_mixing(Eigen::MatrixXd::Ones(2, 3)), DimensionMismatch);
}

TEST_CASE("algorithm names round-trip") {
  for (IcaAlgorithm a : {IcaAlgorithm::FastICA, IcaAlgorithm::InfomaxExtended, IcaAlgorithm::InfomaxLogistic})
    CHECK(parse_algorithm(to_string(a)) == a);
  CHECK_THROWS_AS(parse_algorithm("jade"), InvalidInput);
}
