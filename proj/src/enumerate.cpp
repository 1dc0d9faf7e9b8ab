#include "madasub/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "madasub/errors.hpp"
#include "madasub/proposal.hpp"

namespace madasub {

namespace {

std::vector<double> all_log_kernels(const LogKernel& kernel, Execution execution) {
  const std::size_t p = kernel.p();
  const std::int64_t count = std::int64_t{1} << p;
  std::vector<double> out(static_cast<std::size_t>(count));
  if (execution == Execution::kOpenMP) {
#pragma omp parallel for schedule(dynamic, 1024)
    for (std::int64_t mask = 0; mask < count; ++mask) {
      out[mask] = kernel.evaluate(ModelIndex::from_mask(static_cast<std::uint64_t>(mask), p));
    }
  } else {
    for (std::int64_t mask = 0; mask < count; ++mask) {
      out[mask] = kernel.evaluate(ModelIndex::from_mask(static_cast<std::uint64_t>(mask), p));
    }
  }
  for (double v : out) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      throw NumericError("kernel returned a non-finite value during enumeration");
    }
  }
  return out;
}

}  // namespace

ExactPosterior enumerate_posterior(const LogKernel& kernel, Execution execution) {
  const std::size_t p = kernel.p();
  if (p > kMaxEnumerationP) {
    throw ConfigError("refusing to enumerate 2^" + std::to_string(p) + " models (limit p <= " +
                      std::to_string(kMaxEnumerationP) + ")");
  }
  ExactPosterior post;
  post.p = p;
  post.probabilities = all_log_kernels(kernel, execution);
  auto& prob = post.probabilities;

  const double m = *std::max_element(prob.begin(), prob.end());
  if (m == -std::numeric_limits<double>::infinity()) {
    throw NumericError("every model has zero posterior mass");
  }
  double sum = 0.0;
  for (double& v : prob) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : prob) v /= sum;
  post.log_normalizer = m + std::log(sum);

  post.pips.assign(p, 0.0);
  const auto count = static_cast<std::int64_t>(prob.size());
  const auto pp = static_cast<std::int64_t>(p);
#pragma omp parallel for schedule(static) if (execution == Execution::kOpenMP)
  for (std::int64_t j = 0; j < pp; ++j) {
    double acc = 0.0;
    for (std::int64_t mask = 0; mask < count; ++mask) {
      if ((mask >> j) & 1) acc += prob[mask];
    }
    post.pips[j] = acc;
  }
  return post;
}

Eigen::MatrixXd transition_matrix(const LogKernel& kernel, std::span<const double> rt,
                                  const AcceptanceLogRatio& acceptance, Execution execution) {
  const std::size_t p = kernel.p();
  if (p > kMaxTransitionP) {
    throw ConfigError("transition matrix limited to p <= " + std::to_string(kMaxTransitionP));
  }
  if (rt.size() != p) throw ConfigError("proposal vector must have one entry per variable");
  const std::vector<double> logk = all_log_kernels(kernel, execution);
  const auto count = static_cast<std::int64_t>(logk.size());

  std::vector<ModelIndex> models;
  std::vector<double> log_q(logk.size());
  models.reserve(logk.size());
  for (std::int64_t mask = 0; mask < count; ++mask) {
    models.push_back(ModelIndex::from_mask(static_cast<std::uint64_t>(mask), p));
    log_q[mask] = log_proposal(models.back(), rt);
  }

  Eigen::MatrixXd transition = Eigen::MatrixXd::Zero(count, count);
#pragma omp parallel for schedule(static) if (execution == Execution::kOpenMP)
  for (std::int64_t s = 0; s < count; ++s) {
    double off_diagonal = 0.0;
    for (std::int64_t v = 0; v < count; ++v) {
      if (v == s) continue;
      const double log_alpha =
          acceptance ? acceptance(logk[s], logk[v], models[s], models[v], rt)
                     : accept_log_ratio(logk[s], logk[v], models[s], models[v], rt);
      const double entry = std::exp(log_q[v] + log_alpha);
      transition(s, v) = entry;
      off_diagonal += entry;
    }
    transition(s, s) = 1.0 - off_diagonal;
  }
  return transition;
}

double stationarity_check(const LogKernel& kernel, std::span<const double> rt,
                          const AcceptanceLogRatio& acceptance, Execution execution) {
  if (kernel.p() > kMaxTransitionP) {
    throw ConfigError("stationarity check limited to p <= " + std::to_string(kMaxTransitionP));
  }
  const ExactPosterior post = enumerate_posterior(kernel, execution);
  const Eigen::MatrixXd transition = transition_matrix(kernel, rt, acceptance, execution);
  const Eigen::Map<const Eigen::RowVectorXd> pi(post.probabilities.data(),
                                                static_cast<Eigen::Index>(post.probabilities.size()));
  const Eigen::RowVectorXd moved = pi * transition;
  return (moved - pi).lpNorm<Eigen::Infinity>();
}

}  // namespace madasub
