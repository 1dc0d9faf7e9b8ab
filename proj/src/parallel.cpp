#include "madasub/parallel.hpp"

#include <exception>
#include <memory>
#include <set>
#include <stdexcept>

#include <omp.h>

#include "madasub/errors.hpp"

namespace madasub {

ParallelConfig ParallelConfig::defaults(std::size_t p, std::size_t workers, std::size_t rounds,
                                        std::size_t iterations_per_round, double q,
                                        std::uint64_t base_seed) {
  ParallelConfig cfg;
  cfg.workers = workers;
  cfg.rounds = rounds;
  cfg.iterations_per_round = iterations_per_round;
  const double pd = static_cast<double>(p);
  cfg.r0.assign(workers, std::vector<double>(p, q / pd));
  cfg.weights.assign(workers, std::vector<double>(p, pd));
  cfg.epsilon = default_epsilon(p);
  for (std::size_t k = 0; k < workers; ++k) cfg.seeds.push_back(base_seed + k);
  cfg.starts.assign(workers, std::nullopt);
  return cfg;
}

void ParallelConfig::validate(std::size_t p) const {
  if (workers < 1 || rounds < 1 || iterations_per_round < 1) {
    throw ConfigError("workers, rounds and iterations per round must all be at least 1");
  }
  if (r0.size() != workers || weights.size() != workers || seeds.size() != workers) {
    throw ConfigError("need r0, L and a seed for every worker");
  }
  if (!starts.empty() && starts.size() != workers) throw ConfigError("need one start slot per worker");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigError("worker seeds must be distinct");
  }
  for (std::size_t k = 0; k < workers; ++k) {
    if (r0[k].size() != p || weights[k].size() != p) {
      throw ConfigError("worker " + std::to_string(k + 1) + " has vectors of the wrong length");
    }
    for (std::size_t j = 0; j < p; ++j) {
      if (!(r0[k][j] > 0.0 && r0[k][j] < 1.0) || !(weights[k][j] > 0.0)) {
        throw ConfigError("worker " + std::to_string(k + 1) + ": r0 must lie in (0,1) and L be positive");
      }
    }
  }
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw ConfigError("epsilon must lie in (0, 0.5)");
}

std::vector<double> joint_update(std::span<const std::uint64_t> total_counts,
                                 std::span<const double> r0, std::span<const double> weights,
                                 std::size_t round, std::size_t iterations_per_round,
                                 std::size_t workers) {
  const std::uint64_t sampled = static_cast<std::uint64_t>(round) * iterations_per_round * workers;
  if (total_counts.size() != r0.size() || weights.size() != r0.size()) {
    throw std::logic_error("joint update: vector lengths differ");
  }
  std::vector<double> out(r0.size());
  for (std::size_t j = 0; j < r0.size(); ++j) {
    if (total_counts[j] > sampled) {
      throw std::logic_error("joint update: count for variable " + std::to_string(j + 1) +
                             " exceeds the number of sampled models");
    }
    out[j] = (weights[j] * r0[j] + static_cast<double>(total_counts[j])) /
             (weights[j] + static_cast<double>(sampled));
  }
  return out;
}

ParallelResult run_parallel(const PosteriorKernel& prototype, const ParallelConfig& config,
                            Execution execution, int threads) {
  const std::size_t p = prototype.p();
  config.validate(p);
  const std::size_t workers = config.workers;
  const std::size_t per_round = config.iterations_per_round;

  std::vector<PosteriorKernel> kernels;
  kernels.reserve(workers);
  if (config.share_cache) {
    auto cache = std::make_shared<SharedKernelCache>();
    for (std::size_t k = 0; k < workers; ++k) kernels.emplace_back(prototype.base_ptr(), cache);
  } else {
    for (std::size_t k = 0; k < workers; ++k) kernels.push_back(prototype.fork());
  }

  std::vector<std::optional<ChainCursor>> cursors(workers);
  std::vector<std::optional<ProposalState>> states(workers);
  std::vector<std::vector<double>> current_r = config.r0;
  std::vector<std::exception_ptr> failures(workers);

  ParallelResult result;
  result.traces.resize(workers);
  for (std::size_t k = 0; k < workers; ++k) {
    ChainTrace& trace = result.traces[k];
    trace.sampler = "madasub";
    trace.kernel = prototype.describe();
    trace.seed = config.seeds[k];
    trace.p = p;
    trace.records.reserve(config.rounds * per_round);
  }

  // Work for one worker in one round; reads only its own state and the
  // pre-round joint vector.
  auto run_worker = [&](std::size_t k, std::size_t round) {
    try {
      if (!cursors[k]) {
        const std::optional<ModelIndex> start =
            config.starts.empty() ? std::nullopt : config.starts[k];
        cursors[k] = initialize_chain(kernels[k], config.r0[k], start, config.seeds[k],
                                      config.max_start_retries);
        result.traces[k].start = cursors[k]->current;
        result.traces[k].start_log_kernel = cursors[k]->log_kernel;
      }
      std::vector<double> weights = config.weights[k];
      const double inflation = static_cast<double>((round - 1) * per_round * workers);
      for (double& w : weights) w += inflation;
      states[k].emplace(current_r[k], std::move(weights), config.epsilon);
      advance_madasub(kernels[k], *states[k], *cursors[k], per_round, result.traces[k].records);
    } catch (...) {
      failures[k] = std::current_exception();
    }
  };

  std::vector<std::uint64_t> totals(p, 0);
  for (std::size_t round = 1; round <= config.rounds; ++round) {
    if (execution == Execution::kOpenMP) {
      const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nthreads)
      for (std::size_t k = 0; k < workers; ++k) run_worker(k, round);
    } else {
      for (std::size_t k = 0; k < workers; ++k) run_worker(k, round);
    }

    for (std::size_t k = 0; k < workers; ++k) {
      if (!failures[k]) continue;
      std::string what = "unknown error";
      try {
        std::rethrow_exception(failures[k]);
      } catch (const std::exception& e) {
        what = e.what();
      }
      throw NumericError("worker " + std::to_string(k + 1) + " failed in round " +
                         std::to_string(round) + " after " +
                         std::to_string(result.traces[k].records.size()) + " iterations: " + what);
    }

    RoundCheckpoint cp;
    cp.round = round;
    for (std::size_t k = 0; k < workers; ++k) {
      const auto& counts = states[k]->counts();
      for (std::size_t j = 0; j < p; ++j) totals[j] += counts[j];
      cp.worker_round_counts.push_back(counts);
      cp.worker_round_end.push_back(states[k]->r());
      cp.worker_bound_violations.push_back(states[k]->bound_violations());
    }
    cp.total_counts = totals;
    for (std::size_t k = 0; k < workers; ++k) {
      current_r[k] = joint_update(totals, config.r0[k], config.weights[k], round, per_round, workers);
    }
    cp.joint = current_r;
    result.checkpoints.push_back(std::move(cp));
  }

  for (std::size_t k = 0; k < workers; ++k) {
    ChainTrace& trace = result.traces[k];
    trace.inclusion_counts.assign(p, 0);
    for (const auto& rec : trace.records) {
      for (auto j : rec.accepted.members()) ++trace.inclusion_counts[j];
    }
    trace.final_proposal = current_r[k];
    trace.final_state = std::move(states[k]);
  }
  return result;
}

}  // namespace madasub
