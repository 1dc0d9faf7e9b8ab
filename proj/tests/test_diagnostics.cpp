#include <doctest.h>

#include <cmath>

#include "madasub/diagnostics.hpp"
#include "madasub/enumerate.hpp"
#include "madasub/errors.hpp"
#include "madasub/kernel.hpp"
#include "madasub/proposal.hpp"
#include "madasub/sampler.hpp"
#include "test_util.hpp"

using madasub::ModelIndex;

namespace {

madasub::ChainTrace make_trace(std::size_t p, const std::vector<ModelIndex>& models,
                               const std::vector<bool>& accepts) {
  madasub::ChainTrace trace;
  trace.p = p;
  trace.start = ModelIndex(p);
  trace.inclusion_counts.assign(p, 0);
  for (std::size_t t = 0; t < models.size(); ++t) {
    madasub::IterationRecord rec;
    rec.accepted = models[t];
    rec.proposed = models[t];
    rec.accept = accepts[t];
    trace.records.push_back(rec);
    for (auto j : models[t].members()) ++trace.inclusion_counts[j];
  }
  return trace;
}

}  // namespace

TEST_CASE("inclusion frequencies") {
  const std::size_t p = 3;
  std::vector<bool> acc(10, true);
  CHECK(madasub::inclusion_frequencies(make_trace(p, std::vector<ModelIndex>(10, ModelIndex(p)), acc), 0) ==
        std::vector<double>{0, 0, 0});
  CHECK(madasub::inclusion_frequencies(
            make_trace(p, std::vector<ModelIndex>(10, ModelIndex::full(p)), acc), 4) ==
        std::vector<double>{1, 1, 1});
  std::vector<ModelIndex> alt;
  for (int t = 0; t < 10; ++t) alt.push_back(t % 2 ? ModelIndex(p) : ModelIndex(p, {0}));
  CHECK(madasub::inclusion_frequencies(make_trace(p, alt, acc), 0)[0] == 0.5);
  CHECK(madasub::inclusion_frequencies(make_trace(p, alt, acc), 2)[0] == 0.5);
  CHECK_THROWS_AS(madasub::inclusion_frequencies(make_trace(p, alt, acc), 10), madasub::ConfigError);
}

TEST_CASE("acceptance rates") {
  const std::vector<ModelIndex> models(8, ModelIndex(2));
  CHECK(madasub::acceptance_rate(make_trace(2, models, std::vector<bool>(8, true))) == 1.0);
  CHECK(madasub::acceptance_rate(make_trace(2, models, std::vector<bool>(8, false))) == 0.0);
  std::vector<bool> half{true, true, true, true, false, false, false, false};
  const auto trace = make_trace(2, models, half);
  CHECK(madasub::acceptance_rate(trace) == 0.5);
  const auto cumulative = madasub::acceptance_rate_series(trace);
  CHECK(cumulative.back() == 0.5);
  CHECK(cumulative[3] == 1.0);
  const auto window = madasub::acceptance_rate_series(trace, 2);
  CHECK(window[0] == 1.0);
  CHECK(window[4] == 0.5);
  CHECK(window[7] == 0.0);
  CHECK_THROWS_AS(madasub::acceptance_rate(trace, 8), madasub::ConfigError);
}

TEST_CASE("effective sample size") {
  madasub::Rng rng(42);
  std::vector<double> iid(100000);
  for (auto& v : iid) v = rng.uniform() < 0.5 ? 1.0 : 0.0;
  const double e = madasub::ess_indicator(iid);
  CHECK(e / 1e5 >= 0.9);
  CHECK(e / 1e5 <= 1.1);

  std::vector<double> doubled(100000);
  for (std::size_t i = 0; i < doubled.size(); i += 2) doubled[i] = doubled[i + 1] = iid[i];
  CHECK(std::abs(madasub::ess_indicator(doubled) / 50000.0 - 1.0) <= 0.1);

  std::vector<double> constant(500, 1.0);
  CHECK(madasub::ess_indicator(constant) == 500.0);
  CHECK_THROWS_AS(madasub::ess_indicator(std::vector<double>(99, 0.0)), madasub::ConfigError);
}

TEST_CASE("median probability model") {
  CHECK(madasub::median_probability_model(std::vector<double>{0.5, 0.5, 0.5}) == ModelIndex::full(3));
  CHECK(madasub::median_probability_model(std::vector<double>{0.1, 0.49, 0.2}) == ModelIndex(3));
  madasub::Rng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const auto pips = testutil::random_probabilities(6, rng, 0.01, 0.99);
    double best = -INFINITY;
    ModelIndex argmax(6);
    for (std::uint64_t m = 0; m < 64; ++m) {
      const double lq = madasub::log_proposal(ModelIndex::from_mask(m, 6), pips);
      if (lq > best) {
        best = lq;
        argmax = ModelIndex::from_mask(m, 6);
      }
    }
    CHECK(madasub::median_probability_model(pips) == argmax);
  }
}

TEST_CASE("marginal odds initialization") {
  // logk({j}) - logk({}) = w_j
  const std::vector<double> w{0.0, 50.0, -50.0, std::log(3.0)};
  madasub::PosteriorKernel k(testutil::product_kernel(w));
  const auto r0 = madasub::marginal_odds_init(k);
  CHECK(r0[0] == 0.5);
  CHECK(r0[1] == 0.9);
  CHECK(r0[2] == 0.25);
  CHECK(r0[3] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(k.evaluations() == 5);

  std::vector<double> w20(20, -40.0);
  madasub::PosteriorKernel k20(testutil::product_kernel(w20));
  CHECK(madasub::marginal_odds_init(k20)[7] == 0.05);

  auto null_dead = std::make_shared<madasub::FunctionKernel>(
      3, [](const ModelIndex& s) { return s.empty() ? -HUGE_VAL : 0.0; });
  madasub::PosteriorKernel kd(null_dead);
  CHECK_THROWS_AS(madasub::marginal_odds_init(kd), madasub::ConfigError);
}

TEST_CASE("total variation against enumeration") {
  auto k = testutil::product_kernel({0.5, -0.5});
  const auto exact = madasub::enumerate_posterior(*k);
  madasub::ModelDistribution exact_copy;
  for (std::uint64_t m = 0; m < 4; ++m) exact_copy[ModelIndex::from_mask(m, 2)] = exact.probabilities[m];
  CHECK(madasub::total_variation(exact_copy, exact) <= 1e-15);
  madasub::ModelDistribution point{{ModelIndex(2), 1.0}};
  CHECK(madasub::total_variation(point, exact) ==
        doctest::Approx(1.0 - exact.probabilities[0]).epsilon(1e-14));
}

TEST_CASE("trace frequencies agree with sampler counts and TV shrinks with T") {
  auto d = std::make_shared<const madasub::Dataset>(testutil::random_gaussian(40, 6, 13, 0.5));
  auto base = std::make_shared<madasub::ConjugateLinearKernel>(
      d, madasub::CoefficientPriorSpec{madasub::CoefficientPriorSpec::Kind::kGPrior, 40.0},
      madasub::ModelPriorSpec::uniform());
  const auto exact = madasub::enumerate_posterior(*base);
  std::vector<std::vector<double>> tv(3);
  const std::size_t lengths[] = {1000, 10000, 100000};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (int i = 0; i < 3; ++i) {
      madasub::PosteriorKernel k(base);
      auto cfg = madasub::SamplerConfig::defaults(6);
      cfg.iterations = lengths[i];
      cfg.seed = seed;
      const auto trace = madasub::run_madasub(k, cfg);
      const auto f = madasub::inclusion_frequencies(trace, 0);
      for (std::size_t j = 0; j < 6; ++j) {
        CHECK(f[j] == static_cast<double>(trace.inclusion_counts[j]) / static_cast<double>(lengths[i]));
      }
      tv[i].push_back(madasub::total_variation(madasub::empirical_model_distribution(trace, 0), exact));
    }
  }
  const double m0 = madasub::median(tv[0]);
  const double m1 = madasub::median(tv[1]);
  const double m2 = madasub::median(tv[2]);
  CHECK(m0 > m1);
  CHECK(m1 > m2);
}
