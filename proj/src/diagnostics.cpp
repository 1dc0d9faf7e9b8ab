#include "madasub/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "madasub/errors.hpp"

namespace madasub {

std::vector<double> inclusion_frequencies(const ChainTrace& trace, std::size_t burn_in) {
  if (burn_in >= trace.length()) throw ConfigError("burn-in must be shorter than the trace");
  std::vector<std::uint64_t> counts(trace.p, 0);
  for (std::size_t t = burn_in; t < trace.length(); ++t) {
    for (auto j : trace.records[t].accepted.members()) ++counts[j];
  }
  const double m = static_cast<double>(trace.length() - burn_in);
  std::vector<double> f(trace.p);
  for (std::size_t j = 0; j < trace.p; ++j) f[j] = static_cast<double>(counts[j]) / m;
  return f;
}

double acceptance_rate(const ChainTrace& trace, std::size_t burn_in) {
  if (burn_in >= trace.length()) throw ConfigError("acceptance rate over an empty window");
  std::size_t accepted = 0;
  for (std::size_t t = burn_in; t < trace.length(); ++t) accepted += trace.records[t].accept;
  return static_cast<double>(accepted) / static_cast<double>(trace.length() - burn_in);
}

std::vector<double> acceptance_rate_series(const ChainTrace& trace, std::size_t window) {
  if (trace.length() == 0) throw ConfigError("acceptance rate over an empty window");
  std::vector<double> out(trace.length());
  std::size_t accepted = 0;
  for (std::size_t t = 0; t < trace.length(); ++t) {
    accepted += trace.records[t].accept;
    if (window != 0 && t >= window) accepted -= trace.records[t - window].accept;
    const std::size_t span = window == 0 ? t + 1 : std::min(window, t + 1);
    out[t] = static_cast<double>(accepted) / static_cast<double>(span);
  }
  return out;
}

double ess_indicator(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 100) throw ConfigError("effective sample size needs at least 100 values");
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = series[i] - mean;

  auto autocov = [&](std::size_t lag) {
    double acc = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) acc += centered[i] * centered[i + lag];
    return acc / static_cast<double>(n);
  };
  const double c0 = autocov(0);
  if (!(c0 > 0.0)) return static_cast<double>(n);

  double sum = 0.0;
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    const double gamma = (autocov(2 * m) + autocov(2 * m + 1)) / c0;
    if (!(gamma > 0.0)) break;
    sum += gamma;
  }
  const double tau = -1.0 + 2.0 * sum;
  return static_cast<double>(n) / tau;
}

std::vector<double> ess_per_variable(const ChainTrace& trace, std::size_t burn_in) {
  if (burn_in >= trace.length()) throw ConfigError("burn-in must be shorter than the trace");
  const std::size_t m = trace.length() - burn_in;
  std::vector<std::vector<double>> series(trace.p, std::vector<double>(m, 0.0));
  for (std::size_t t = 0; t < m; ++t) {
    for (auto j : trace.records[burn_in + t].accepted.members()) series[j][t] = 1.0;
  }
  std::vector<double> out(trace.p);
  for (std::size_t j = 0; j < trace.p; ++j) out[j] = ess_indicator(series[j]);
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ConfigError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

ModelIndex median_probability_model(std::span<const double> pips) {
  std::vector<ModelIndex::Index> members;
  for (std::size_t j = 0; j < pips.size(); ++j) {
    if (pips[j] >= 0.5) members.push_back(static_cast<ModelIndex::Index>(j));
  }
  return ModelIndex(pips.size(), std::move(members));
}

std::vector<double> marginal_odds_init(PosteriorKernel& kernel) {
  const std::size_t p = kernel.p();
  const double null_value = kernel.log_kernel(ModelIndex(p));
  if (null_value == -std::numeric_limits<double>::infinity()) {
    throw ConfigError("marginal-odds initialization needs a null model with positive mass");
  }
  const double lower = 1.0 / static_cast<double>(p);
  std::vector<double> r0(p);
  for (std::size_t j = 0; j < p; ++j) {
    const double log_odds =
        kernel.log_kernel(ModelIndex(p, {static_cast<ModelIndex::Index>(j)})) - null_value;
    // PO / (1 + PO) as a logistic of the log odds
    const double marginal = log_odds >= 0.0 ? 1.0 / (1.0 + std::exp(-log_odds))
                                            : std::exp(log_odds) / (1.0 + std::exp(log_odds));
    r0[j] = std::min(std::max(marginal, lower), 0.9);
  }
  return r0;
}

ModelDistribution empirical_model_distribution(const ChainTrace& trace, std::size_t burn_in) {
  if (burn_in >= trace.length()) throw ConfigError("burn-in must be shorter than the trace");
  ModelDistribution out;
  const double weight = 1.0 / static_cast<double>(trace.length() - burn_in);
  for (std::size_t t = burn_in; t < trace.length(); ++t) out[trace.records[t].accepted] += weight;
  return out;
}

double total_variation(const ModelDistribution& empirical, const ExactPosterior& exact) {
  double visited_exact = 0.0;
  double diff = 0.0;
  for (const auto& [model, freq] : empirical) {
    const double pi = exact.probability(model);
    visited_exact += pi;
    diff += std::abs(freq - pi);
  }
  // Unvisited models contribute their full exact mass.
  diff += std::max(0.0, 1.0 - visited_exact);
  return 0.5 * diff;
}

}  // namespace madasub
