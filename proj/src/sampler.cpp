#include "madasub/sampler.hpp"

#include <cmath>
#include <limits>

#include "madasub/errors.hpp"

namespace madasub {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void add_counts(std::vector<std::uint64_t>& counts, const ModelIndex& s) {
  for (auto j : s.members()) ++counts[j];
}

std::vector<std::uint64_t> column_sums(const std::vector<IterationRecord>& records, std::size_t p) {
  std::vector<std::uint64_t> counts(p, 0);
  for (const auto& rec : records) add_counts(counts, rec.accepted);
  return counts;
}

NumericError at_iteration(const std::string& sampler, std::size_t t, const std::exception& e) {
  return NumericError(sampler + " failed at iteration " + std::to_string(t) + ": " + e.what());
}

// Independence MH step shared by the adaptive and fixed samplers: p Bernoulli
// draws, then one uniform for the accept decision.
void independence_step(PosteriorKernel& kernel, std::span<const double> rt, ChainCursor& cursor,
                       std::vector<IterationRecord>& records) {
  ModelIndex proposed = propose(rt, cursor.rng);
  const double u = cursor.rng.uniform();
  const double lk = kernel.log_kernel(proposed);
  const double log_alpha = accept_log_ratio(cursor.log_kernel, lk, cursor.current, proposed, rt);
  const bool accept = u < std::exp(log_alpha);
  if (accept) {
    cursor.current = proposed;
    cursor.log_kernel = lk;
  }
  records.push_back({std::move(proposed), cursor.current, accept, cursor.log_kernel});
}

}  // namespace

SamplerConfig SamplerConfig::defaults(std::size_t p, double q) {
  SamplerConfig cfg;
  const double pd = static_cast<double>(p);
  cfg.r0.assign(p, q / pd);
  cfg.weights.assign(p, pd);
  cfg.epsilon = default_epsilon(p);
  return cfg;
}

void SamplerConfig::validate(std::size_t p) const {
  if (iterations < 1) throw ConfigError("iterations must be at least 1");
  if (burn_in >= iterations) throw ConfigError("burn-in must be smaller than the number of iterations");
  if (r0.size() != p) throw ConfigError("r0 must have one entry per variable");
  if (weights.size() != p) throw ConfigError("L must have one entry per variable");
  for (std::size_t j = 0; j < p; ++j) {
    if (!(r0[j] > 0.0 && r0[j] < 1.0)) throw ConfigError("r0 entries must lie in (0,1)");
    if (!(weights[j] > 0.0) || !std::isfinite(weights[j])) throw ConfigError("L entries must be positive");
  }
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw ConfigError("epsilon must lie in (0, 0.5)");
  if (start && start->p() != p) throw ConfigError("start model has the wrong dimension");
  if (delta && !(*delta > 0.0 && *delta < 1.0)) throw ConfigError("delta must lie in (0,1)");
  if (max_start_retries < 0) throw ConfigError("start retries must be non-negative");
}

std::size_t ChainTrace::accepted_count() const {
  std::size_t n = 0;
  for (const auto& rec : records) n += rec.accept ? 1 : 0;
  return n;
}

ChainCursor initialize_chain(PosteriorKernel& kernel, std::span<const double> r0,
                             const std::optional<ModelIndex>& start, std::uint64_t seed,
                             int max_retries) {
  ChainCursor cursor{ModelIndex(kernel.p()), 0.0, Rng(seed)};
  if (start) {
    cursor.current = *start;
    cursor.log_kernel = kernel.log_kernel(*start);
    if (cursor.log_kernel == kNegInf) {
      throw ConfigError("start model " + start->to_string() + " has zero posterior mass");
    }
    return cursor;
  }
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    ModelIndex s = propose(r0, cursor.rng);
    const double lk = kernel.log_kernel(s);
    if (lk != kNegInf) {
      cursor.current = std::move(s);
      cursor.log_kernel = lk;
      return cursor;
    }
  }
  cursor.current = ModelIndex(kernel.p());
  cursor.log_kernel = kernel.log_kernel(cursor.current);
  if (cursor.log_kernel == kNegInf) {
    throw NumericError("no start model with positive posterior mass (null model is -inf)");
  }
  return cursor;
}

std::optional<std::size_t> advance_madasub(PosteriorKernel& kernel, ProposalState& state,
                                           ChainCursor& cursor, std::size_t iterations,
                                           std::vector<IterationRecord>& records,
                                           const IterationObserver& observer,
                                           std::optional<double> delta, std::size_t burn_in) {
  std::vector<std::uint64_t> post_burn_in(delta ? state.p() : 0, 0);
  const std::size_t offset = records.size();
  for (std::size_t t = 1; t <= iterations; ++t) {
    try {
      independence_step(kernel, state.truncated(), cursor, records);
    } catch (const NumericError& e) {
      throw at_iteration("MAdaSub", offset + t, e);
    }
    state.update(cursor.current);
    if (observer) observer(t, &state, cursor.current);
    if (delta && t > burn_in) {
      add_counts(post_burn_in, cursor.current);
      const double m = static_cast<double>(t - burn_in);
      double gap = 0.0;
      for (std::size_t j = 0; j < state.p(); ++j) {
        gap = std::max(gap, std::abs(static_cast<double>(post_burn_in[j]) / m - state.r()[j]));
      }
      if (gap <= *delta) return t;
    }
  }
  return std::nullopt;
}

ChainTrace run_madasub(PosteriorKernel& kernel, const SamplerConfig& config,
                       const IterationObserver& observer) {
  const std::size_t p = kernel.p();
  config.validate(p);
  ProposalState state(config.r0, config.weights, config.epsilon);
  ChainCursor cursor =
      initialize_chain(kernel, config.r0, config.start, config.seed, config.max_start_retries);

  ChainTrace trace;
  trace.sampler = "madasub";
  trace.kernel = kernel.describe();
  trace.seed = config.seed;
  trace.p = p;
  trace.burn_in = config.burn_in;
  trace.start = cursor.current;
  trace.start_log_kernel = cursor.log_kernel;
  trace.records.reserve(config.iterations);
  trace.stop_iteration = advance_madasub(kernel, state, cursor, config.iterations, trace.records,
                                         observer, config.delta, config.burn_in);
  trace.inclusion_counts = state.counts();
  trace.final_proposal = state.r();
  trace.final_state = std::move(state);
  return trace;
}

ChainTrace run_independence_fixed(PosteriorKernel& kernel, std::span<const double> r,
                                  std::size_t iterations, std::uint64_t seed, double eps,
                                  const std::optional<ModelIndex>& start) {
  const std::size_t p = kernel.p();
  if (r.size() != p) throw ConfigError("proposal vector must have one entry per variable");
  if (iterations < 1) throw ConfigError("iterations must be at least 1");
  if (eps < 0.0 || eps >= 0.5) throw ConfigError("epsilon must lie in [0, 0.5)");
  std::vector<double> rt = eps > 0.0 ? truncate(r, eps) : std::vector<double>(r.begin(), r.end());
  for (double v : rt) {
    if (!(v > 0.0 && v < 1.0)) throw ConfigError("proposal probabilities must lie in (0,1)");
  }
  ChainCursor cursor = initialize_chain(kernel, rt, start, seed, 100);

  ChainTrace trace;
  trace.sampler = "independence";
  trace.kernel = kernel.describe();
  trace.seed = seed;
  trace.p = p;
  trace.start = cursor.current;
  trace.start_log_kernel = cursor.log_kernel;
  trace.records.reserve(iterations);
  for (std::size_t t = 1; t <= iterations; ++t) {
    try {
      independence_step(kernel, rt, cursor, trace.records);
    } catch (const NumericError& e) {
      throw at_iteration("independence sampler", t, e);
    }
  }
  trace.inclusion_counts = column_sums(trace.records, p);
  trace.final_proposal = std::move(rt);
  return trace;
}

ChainTrace run_mc3(PosteriorKernel& kernel, std::size_t iterations, std::uint64_t seed,
                   const ModelIndex& start) {
  const std::size_t p = kernel.p();
  if (iterations < 1) throw ConfigError("iterations must be at least 1");
  if (start.p() != p) throw ConfigError("start model has the wrong dimension");
  ChainCursor cursor{start, kernel.log_kernel(start), Rng(seed)};
  if (cursor.log_kernel == kNegInf) throw ConfigError("MC3 start model has zero posterior mass");

  ChainTrace trace;
  trace.sampler = "mc3";
  trace.kernel = kernel.describe();
  trace.seed = seed;
  trace.p = p;
  trace.start = start;
  trace.start_log_kernel = cursor.log_kernel;
  trace.records.reserve(iterations);
  for (std::size_t t = 1; t <= iterations; ++t) {
    try {
      const auto j = static_cast<ModelIndex::Index>(cursor.rng.index(p));
      ModelIndex proposed = cursor.current.toggled(j);
      const double u = cursor.rng.uniform();
      const double lk = kernel.log_kernel(proposed);
      const double log_alpha = lk == kNegInf ? kNegInf : std::min(0.0, lk - cursor.log_kernel);
      const bool accept = u < std::exp(log_alpha);
      if (accept) {
        cursor.current = proposed;
        cursor.log_kernel = lk;
      }
      trace.records.push_back({std::move(proposed), cursor.current, accept, cursor.log_kernel});
    } catch (const NumericError& e) {
      throw at_iteration("MC3", t, e);
    }
  }
  trace.inclusion_counts = column_sums(trace.records, p);
  return trace;
}

}  // namespace madasub
