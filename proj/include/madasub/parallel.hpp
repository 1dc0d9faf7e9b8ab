#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "madasub/kernel.hpp"
#include "madasub/sampler.hpp"

namespace madasub {

struct ParallelConfig {
  std::size_t workers = 1;               // K
  std::size_t rounds = 10;               // R
  std::size_t iterations_per_round = 1;  // T
  std::vector<std::vector<double>> r0;       // per worker
  std::vector<std::vector<double>> weights;  // per worker L^(k)
  double epsilon = 0.0;
  std::vector<std::uint64_t> seeds;  // distinct, one per worker
  std::vector<std::optional<ModelIndex>> starts;
  bool share_cache = false;
  int max_start_retries = 100;

  // Every worker gets r0 = q/p, L = p, eps = 1/p and seed base_seed + k.
  static ParallelConfig defaults(std::size_t p, std::size_t workers, std::size_t rounds,
                                 std::size_t iterations_per_round, double q = 5.0,
                                 std::uint64_t base_seed = 1);

  void validate(std::size_t p) const;
};

struct RoundCheckpoint {
  std::size_t round = 0;                     // m
  std::vector<std::uint64_t> total_counts;   // over all K chains and all mT iterations
  std::vector<std::vector<std::uint64_t>> worker_round_counts;  // this round only
  std::vector<std::vector<double>> worker_round_end;  // each chain's own r before the exchange
  std::vector<std::vector<double>> joint;    // rbar^(k,m)
  // Within-round steps that broke |r(t) - r(t-1)| <= 2 / (L + t - 1).
  std::vector<std::size_t> worker_bound_violations;
};

struct ParallelResult {
  std::vector<ChainTrace> traces;  // one per worker, all R*T iterations
  std::vector<RoundCheckpoint> checkpoints;
};

// rbar_j^(k,m) = (L_j^(k) r0_j^(k) + total_j) / (L_j^(k) + m T K). Throws
// std::logic_error if a count exceeds m T K.
std::vector<double> joint_update(std::span<const std::uint64_t> total_counts,
                                 std::span<const double> r0, std::span<const double> weights,
                                 std::size_t round, std::size_t iterations_per_round,
                                 std::size_t workers);

enum class Execution { kSerial, kOpenMP };

// Round-based multi-chain MAdaSub. Round m resumes every chain from its last
// model with proposal rbar^(k,m-1) and weights L^(k) + (m-1) T K; chains only
// see pooled counts at the barrier between rounds. Results depend on the
// seeds only, not on thread scheduling; kSerial is the reference path.
ParallelResult run_parallel(const PosteriorKernel& prototype, const ParallelConfig& config,
                            Execution execution = Execution::kOpenMP, int threads = 0);

}  // namespace madasub
