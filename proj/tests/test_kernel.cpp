#include <doctest.h>

#include <cmath>
#include <cstring>
#include <thread>

#include "madasub/errors.hpp"
#include "madasub/glm.hpp"
#include "madasub/kernel.hpp"
#include "test_util.hpp"

using madasub::ModelIndex;

namespace {

std::shared_ptr<const madasub::Dataset> shared(madasub::Dataset d) {
  return std::make_shared<const madasub::Dataset>(std::move(d));
}

}  // namespace

TEST_CASE("uniform prior with a constant marginal gives a flat kernel") {
  madasub::PosteriorKernel k(testutil::uniform_kernel(6));
  madasub::Rng rng(1);
  for (int rep = 0; rep < 20; ++rep) CHECK(k.log_kernel(testutil::random_model(6, rng)) == 0.0);
}

TEST_CASE("ebic kernel is exactly minus half EBIC") {
  const auto d = shared(testutil::random_gaussian(50, 10, 3));
  const auto bin = shared(testutil::random_binomial(80, 10, 4));
  madasub::EbicKernel kg(d, 0.5);
  madasub::EbicKernel kb(bin, 1.0);
  madasub::Rng rng(9);
  for (int rep = 0; rep < 5; ++rep) {
    const ModelIndex s = testutil::random_model(10, rng, 0.3);
    CHECK(kg.evaluate(s) == -0.5 * madasub::ebic(*d, s, 0.5));
    CHECK(kb.evaluate(s) == -0.5 * madasub::ebic(*bin, s, 1.0));
  }
}

TEST_CASE("ebic kernel maps failed fits to -infinity") {
  Eigen::MatrixXd x(8, 2);
  x << -4, 0.3, -3, -1.0, -2, 0.2, -1, 0.8, 1, -0.5, 2, 0.1, 3, 1.3, 4, -0.2;
  Eigen::VectorXd y(8);
  y << 0, 0, 0, 0, 1, 1, 1, 1;
  madasub::EbicKernel k(shared(madasub::make_dataset(x, y, madasub::Family::kBinomial)), 0.0);
  CHECK(k.evaluate(ModelIndex(2, {0})) == -INFINITY);
  CHECK(std::isfinite(k.evaluate(ModelIndex(2, {1}))));

  auto d = testutil::random_gaussian(20, 3, 2);
  d.x.col(2) = d.x.col(1);
  madasub::EbicKernel kg(shared(d), 0.0);
  CHECK(kg.evaluate(ModelIndex(3, {1, 2})) == -INFINITY);
}

TEST_CASE("conjugate kernel is log posterior odds against the null model") {
  const auto d = shared(testutil::random_gaussian(40, 8, 5));
  const madasub::CoefficientPriorSpec coef{madasub::CoefficientPriorSpec::Kind::kGPrior, 40.0};
  const auto prior = madasub::ModelPriorSpec::beta_binomial(1.0, 3.0);
  madasub::ConjugateLinearKernel k(d, coef, prior);
  CHECK(k.evaluate(ModelIndex(8)) == 0.0);
  madasub::Rng rng(1);
  for (int rep = 0; rep < 10; ++rep) {
    const ModelIndex s = testutil::random_model(8, rng);
    const double expected = madasub::log_marginal_conjugate_linear(*d, s, coef) +
                            madasub::log_model_prior(s, prior) -
                            madasub::log_model_prior(ModelIndex(8), prior);
    CHECK(k.evaluate(s) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("cache: one underlying computation, bit-identical values") {
  const auto d = shared(testutil::random_gaussian(40, 12, 6));
  auto base = std::make_shared<madasub::ConjugateLinearKernel>(
      d, madasub::CoefficientPriorSpec{madasub::CoefficientPriorSpec::Kind::kGPrior, 40.0},
      madasub::ModelPriorSpec::uniform());
  madasub::PosteriorKernel k(base);
  const ModelIndex s(12, {0, 3, 7});
  const double first = k.log_kernel(s);
  CHECK(k.evaluations() == 1);
  const double second = k.log_kernel(s);
  CHECK(k.evaluations() == 1);
  CHECK(std::memcmp(&first, &second, sizeof(double)) == 0);
  CHECK(first == base->evaluate(s));

  madasub::Rng rng(2);
  for (int rep = 0; rep < 1000; ++rep) {
    const ModelIndex t = testutil::random_model(12, rng);
    const double a = k.log_kernel(t);
    const double b = base->evaluate(t);
    CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
  }
}

TEST_CASE("bounded cache keeps computing past its limit") {
  madasub::PosteriorKernel k(testutil::uniform_kernel(8), 4);
  for (std::uint64_t m = 0; m < 10; ++m) k.log_kernel(ModelIndex::from_mask(m, 8));
  CHECK(k.cache_size() == 4);
  k.log_kernel(ModelIndex::from_mask(9, 8));
  CHECK(k.evaluations() == 11);
  k.log_kernel(ModelIndex::from_mask(2, 8));
  CHECK(k.evaluations() == 11);
}

TEST_CASE("shared cache agrees with per-chain caches under concurrency") {
  const auto d = shared(testutil::random_gaussian(40, 10, 8));
  auto base = std::make_shared<madasub::ConjugateLinearKernel>(
      d, madasub::CoefficientPriorSpec{madasub::CoefficientPriorSpec::Kind::kGPrior, 40.0},
      madasub::ModelPriorSpec::uniform());
  auto cache = std::make_shared<madasub::SharedKernelCache>();
  madasub::PosteriorKernel proto(base, cache);
  std::vector<std::vector<double>> values(4);
  std::vector<std::thread> threads;
  for (int w = 0; w < 4; ++w) {
    threads.emplace_back([&, w] {
      madasub::PosteriorKernel k = proto.fork();
      for (std::uint64_t m = 0; m < 1024; ++m) {
        values[w].push_back(k.log_kernel(ModelIndex::from_mask((m * 7 + w) % 1024, 10)));
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(cache->size() == 1024);
  for (int w = 0; w < 4; ++w) {
    for (std::uint64_t m = 0; m < 1024; ++m) {
      CHECK(values[w][m] == base->evaluate(ModelIndex::from_mask((m * 7 + w) % 1024, 10)));
    }
  }
}

TEST_CASE("non-finite kernel values other than -infinity are errors") {
  auto bad = std::make_shared<madasub::FunctionKernel>(
      3, [](const ModelIndex& s) { return s.size() == 2 ? NAN : (s.size() == 3 ? INFINITY : 0.0); });
  madasub::PosteriorKernel k(bad);
  CHECK_THROWS_AS(k.log_kernel(ModelIndex(3, {0, 1})), madasub::NumericError);
  CHECK_THROWS_AS(k.log_kernel(ModelIndex::full(3)), madasub::NumericError);
  CHECK_THROWS_AS(k.log_kernel(ModelIndex(4)), madasub::ConfigError);
}
