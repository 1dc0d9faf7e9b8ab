#include <doctest.h>

#include <cmath>

#include "madasub/errors.hpp"
#include "madasub/simulate.hpp"

TEST_CASE("Toeplitz covariance entries") {
  const auto s = madasub::toeplitz_covariance(5, 0.9);
  CHECK(s(0, 1) == doctest::Approx(0.9));
  CHECK(s(0, 2) == doctest::Approx(0.81));
  CHECK(s(4, 0) == doctest::Approx(std::pow(0.9, 4)));
  CHECK(s(2, 2) == 1.0);
  const auto l = madasub::toeplitz_cholesky(5, 0.9);
  CHECK((l * l.transpose() - s).cwiseAbs().maxCoeff() <= 1e-12);
  // the factor is the AR(1) recursion: column 0 is rho^k, diagonal sqrt(1 - rho^2)
  CHECK(l(3, 0) == doctest::Approx(std::pow(0.9, 3)));
  CHECK(l(3, 3) == doctest::Approx(std::sqrt(1 - 0.81)));
}

TEST_CASE("independent covariates at rho = 0") {
  madasub::SimDesign d;
  d.n = 100000;
  d.p = 4;
  d.rho = 0.0;
  d.beta.assign(4, 0.0);
  d.seed = 3;
  const auto sim = madasub::generate_dataset(d);
  const Eigen::MatrixXd cov = sim.data.x.transpose() * sim.data.x / static_cast<double>(d.n);
  CHECK((cov - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 0.02);
}

TEST_CASE("sample covariance at rho = 0.9") {
  madasub::SimDesign d;
  d.n = 100000;
  d.p = 5;
  d.rho = 0.9;
  d.beta.assign(5, 0.0);
  const auto sim = madasub::generate_dataset(d);
  const Eigen::MatrixXd cov = sim.data.x.transpose() * sim.data.x / static_cast<double>(d.n);
  CHECK((cov - madasub::toeplitz_covariance(5, 0.9)).cwiseAbs().maxCoeff() <= 0.03);
}

TEST_CASE("AR(1) path matches the dense factor distributionally") {
  madasub::SimDesign d;
  d.n = 4000;
  d.p = 2100;
  d.rho = 0.6;
  d.beta.assign(d.p, 0.0);
  const auto sim = madasub::generate_dataset(d);
  const double n = static_cast<double>(d.n);
  for (int j : {0, 1000, 2098}) {
    CHECK(sim.data.x.col(j).squaredNorm() / n == doctest::Approx(1.0).epsilon(0.06));
    CHECK(sim.data.x.col(j).dot(sim.data.x.col(j + 1)) / n == doctest::Approx(0.6).epsilon(0.1));
  }
}

TEST_CASE("illustrative design") {
  const auto d = madasub::illustrative_design(1);
  CHECK(d.n == 60);
  CHECK(d.p == 20);
  CHECK(d.rho == 0.9);
  CHECK(d.sigma2 == 1.0);
  CHECK(d.beta[0] == 0.4);
  CHECK(d.beta[4] == 2.0);
  CHECK(d.beta[5] == 0.0);
  const auto sim = madasub::generate_dataset(d);
  CHECK(sim.active == madasub::ModelIndex(20, {0, 1, 2, 3, 4}));
  CHECK(sim.data.centered);
  CHECK(std::abs(sim.data.x.col(3).mean()) <= 1e-10);
  CHECK(std::abs(sim.data.y.mean()) <= 1e-10);
  // same seed, same data
  CHECK(madasub::generate_dataset(d).data.y == sim.data.y);
}

TEST_CASE("randomized designs") {
  std::vector<int> sizes(11, 0);
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    madasub::SimDesign d;
    d.n = 30;
    d.p = 40;
    d.randomized = true;
    d.seed = seed;
    const auto sim = madasub::generate_dataset(d);
    REQUIRE(sim.active.size() <= 10);
    ++sizes[sim.active.size()];
    for (std::size_t j = 0; j < 40; ++j) {
      if (sim.active.contains(static_cast<madasub::ModelIndex::Index>(j))) {
        CHECK(std::abs(sim.beta[j]) < 2.0);
        CHECK(sim.beta[j] != 0.0);
      } else {
        CHECK(sim.beta[j] == 0.0);
      }
    }
  }
  for (int c : sizes) CHECK(c > 0);
}

TEST_CASE("binomial designs and validation") {
  madasub::SimDesign d;
  d.n = 200;
  d.p = 3;
  d.rho = 0.2;
  d.beta = {1.0, 0.0, -1.0};
  d.family = madasub::Family::kBinomial;
  const auto sim = madasub::generate_dataset(d);
  for (Eigen::Index i = 0; i < sim.data.y.size(); ++i) {
    CHECK((sim.data.y[i] == 0.0 || sim.data.y[i] == 1.0));
  }
  d.rho = 1.0;
  CHECK_THROWS_AS(madasub::generate_dataset(d), madasub::ConfigError);
  d.rho = 0.2;
  d.beta = {1.0};
  CHECK_THROWS_AS(madasub::generate_dataset(d), madasub::ConfigError);
}
