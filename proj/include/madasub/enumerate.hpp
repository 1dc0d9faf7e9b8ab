#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "madasub/kernel.hpp"
#include "madasub/model_index.hpp"
#include "madasub/parallel.hpp"

namespace madasub {

inline constexpr std::size_t kMaxEnumerationP = 25;
inline constexpr std::size_t kMaxTransitionP = 12;

// Exact posterior over all 2^p models, indexed by bit mask (bit j-1 is
// variable j).
struct ExactPosterior {
  std::size_t p = 0;
  std::vector<double> probabilities;
  std::vector<double> pips;
  double log_normalizer = 0.0;  // log sum_S exp(log kernel(S))

  double probability(const ModelIndex& s) const { return probabilities[s.mask()]; }
};

// Evaluates the base kernel on every model (a parallel map under kOpenMP),
// then normalizes with a max-shifted log-sum-exp in fixed mask order, so both
// execution modes give identical tables. Refuses p > kMaxEnumerationP.
ExactPosterior enumerate_posterior(const LogKernel& kernel,
                                   Execution execution = Execution::kOpenMP);

using AcceptanceLogRatio = std::function<double(double log_kernel_s, double log_kernel_v,
                                                const ModelIndex& s, const ModelIndex& v,
                                                std::span<const double> rt)>;

// Full 2^p x 2^p Metropolis-Hastings matrix of the independence sampler with
// fixed proposal rt: P(S,V) = q(V; rt) alpha(S,V) off the diagonal, the
// remaining mass on the diagonal. `acceptance` defaults to accept_log_ratio.
Eigen::MatrixXd transition_matrix(const LogKernel& kernel, std::span<const double> rt,
                                  const AcceptanceLogRatio& acceptance = {},
                                  Execution execution = Execution::kOpenMP);

// || pi P - pi ||_inf for the matrix above. Refuses p > kMaxTransitionP.
double stationarity_check(const LogKernel& kernel, std::span<const double> rt,
                          const AcceptanceLogRatio& acceptance = {},
                          Execution execution = Execution::kOpenMP);

}  // namespace madasub
