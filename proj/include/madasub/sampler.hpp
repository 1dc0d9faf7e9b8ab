#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "madasub/kernel.hpp"
#include "madasub/model_index.hpp"
#include "madasub/proposal.hpp"
#include "madasub/rng.hpp"

namespace madasub {

// 1/p, capped at 1/4 so that p <= 2 still gets a valid bound.
inline double default_epsilon(std::size_t p) { return std::min(0.25, 1.0 / static_cast<double>(p)); }

struct SamplerConfig {
  std::size_t iterations = 1000;  // T
  std::size_t burn_in = 0;        // applied at analysis time only
  std::vector<double> r0;
  std::vector<double> weights;    // L_j
  double epsilon = 0.0;
  std::uint64_t seed = 1;
  std::optional<ModelIndex> start;
  // Stop at the first t with max_j |f_j(t) - r_j(t)| <= delta, where f uses
  // the iterations after burn-in.
  std::optional<double> delta;
  int max_start_retries = 100;

  // r0_j = q/p, L_j = p, eps = 1/p.
  static SamplerConfig defaults(std::size_t p, double q = 5.0);

  void validate(std::size_t p) const;
};

struct IterationRecord {
  ModelIndex proposed;
  ModelIndex accepted;  // S(t)
  bool accept = false;
  double log_kernel = 0.0;  // of S(t)
};

struct ChainTrace {
  std::string sampler;
  std::string kernel;
  std::uint64_t seed = 0;
  std::size_t p = 0;
  std::size_t burn_in = 0;
  ModelIndex start;
  double start_log_kernel = 0.0;
  std::vector<IterationRecord> records;  // records[t-1] is iteration t
  std::vector<std::uint64_t> inclusion_counts;  // column sums over records
  std::vector<double> final_proposal;  // r(T) for adaptive runs, the fixed r otherwise
  std::optional<ProposalState> final_state;  // adaptive runs only
  std::optional<std::size_t> stop_iteration;

  std::size_t length() const { return records.size(); }
  std::size_t accepted_count() const;
};

// Invoked after each iteration t with the updated proposal state (if any)
// and the current model.
using IterationObserver =
    std::function<void(std::size_t t, const ProposalState* state, const ModelIndex& current)>;

// Chain position carried across segments (used by the parallel runner).
struct ChainCursor {
  ModelIndex current;
  double log_kernel = 0.0;
  Rng rng;
};

// Draws S(0) ~ Bernoulli(r0) (untruncated) unless `start` is given. A draw with
// -infinity kernel is redrawn up to max_retries times, then the null model is
// used. A given start with -infinity kernel is a ConfigError.
ChainCursor initialize_chain(PosteriorKernel& kernel, std::span<const double> r0,
                             const std::optional<ModelIndex>& start, std::uint64_t seed,
                             int max_retries);

// Runs `iterations` MAdaSub steps from the cursor, adapting `state` and
// appending to `records`. Returns the iteration (1-based, local) at which the
// auto-stop rule fired, if it did.
std::optional<std::size_t> advance_madasub(PosteriorKernel& kernel, ProposalState& state,
                                           ChainCursor& cursor, std::size_t iterations,
                                           std::vector<IterationRecord>& records,
                                           const IterationObserver& observer = {},
                                           std::optional<double> delta = {},
                                           std::size_t burn_in = 0);

// Serial adaptive sampler. Kernel failures abort with the iteration index.
ChainTrace run_madasub(PosteriorKernel& kernel, const SamplerConfig& config,
                       const IterationObserver& observer = {});

// Independence Metropolis-Hastings with a fixed proposal r, truncated to
// [eps, 1-eps] when eps > 0.
ChainTrace run_independence_fixed(PosteriorKernel& kernel, std::span<const double> r,
                                  std::size_t iterations, std::uint64_t seed, double eps = 0.0,
                                  const std::optional<ModelIndex>& start = {});

// Local add/delete sampler: each step toggles one uniformly chosen variable.
ChainTrace run_mc3(PosteriorKernel& kernel, std::size_t iterations, std::uint64_t seed,
                   const ModelIndex& start);

}  // namespace madasub
