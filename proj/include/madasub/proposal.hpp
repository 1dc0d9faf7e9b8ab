#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "madasub/model_index.hpp"
#include "madasub/rng.hpp"

namespace madasub {

class PosteriorKernel;

// Componentwise clamp to [eps, 1 - eps].
std::vector<double> truncate(std::span<const double> r, double eps);

// Independent Bernoulli draw: j is included with probability rt[j]. Consumes
// exactly rt.size() uniforms, in variable order.
ModelIndex propose(std::span<const double> rt, Rng& rng);

// log q(V; rt) = sum_{j in V} log rt_j + sum_{j not in V} log(1 - rt_j).
double log_proposal(const ModelIndex& v, std::span<const double> rt);

// log q(S; rt) - log q(V; rt), summed over the symmetric difference only.
double log_proposal_ratio(const ModelIndex& s, const ModelIndex& v, std::span<const double> rt);

// log alpha = min{0, logk(V) - logk(S) + log q(S) - log q(V)}. A -infinity
// kernel at V gives -infinity.
double accept_log_ratio(double log_kernel_s, double log_kernel_v, const ModelIndex& s,
                        const ModelIndex& v, std::span<const double> rt);
double accept_log_ratio(PosteriorKernel& kernel, const ModelIndex& s, const ModelIndex& v,
                        std::span<const double> rt);

// Adaptive proposal probabilities
//   r_j(t) = (L_j r0_j + count_j) / (L_j + t)
// where count_j is the number of sampled models S(1..t) containing j. r is
// always recomputed from the counts, so it can be reproduced exactly from
// (r0, L, counts, t).
class ProposalState {
 public:
  ProposalState(std::vector<double> r0, std::vector<double> weights, double eps);

  std::size_t p() const { return r0_.size(); }
  std::size_t t() const { return t_; }
  double eps() const { return eps_; }
  const std::vector<double>& r() const { return r_; }
  const std::vector<double>& r0() const { return r0_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  // Clamped view used for proposing.
  const std::vector<double>& truncated() const { return truncated_; }

  // Adds the indicators of `accepted`, advances t and returns
  // max_j |r_j(t) - r_j(t-1)|.
  double update(const ModelIndex& accepted);

  // Variance of the beta pseudo-posterior, r_j (1 - r_j) / (L_j + t + 1).
  double pseudo_posterior_variance(std::size_t j) const;

  // Closed form evaluated from scratch; equals r() bit for bit.
  std::vector<double> recompute() const;

  // Largest |r_j(t) - r_j(t-1)| * (L_j + t - 1) / 2 seen so far; stays <= 1
  // while the diminishing-adaptation bound holds.
  double max_step_ratio() const { return max_step_ratio_; }
  std::size_t bound_violations() const { return bound_violations_; }

 private:
  void refresh();

  std::vector<double> r0_;
  std::vector<double> weights_;
  double eps_;
  std::vector<std::uint64_t> counts_;
  std::size_t t_ = 0;
  std::vector<double> r_;
  std::vector<double> truncated_;
  double max_step_ratio_ = 0.0;
  std::size_t bound_violations_ = 0;
};

}  // namespace madasub
