#include "madasub/proposal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "madasub/errors.hpp"
#include "madasub/kernel.hpp"

namespace madasub {

std::vector<double> truncate(std::span<const double> r, double eps) {
  std::vector<double> out(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) out[j] = std::clamp(r[j], eps, 1.0 - eps);
  return out;
}

ModelIndex propose(std::span<const double> rt, Rng& rng) {
  std::vector<ModelIndex::Index> members;
  for (std::size_t j = 0; j < rt.size(); ++j) {
    if (rng.uniform() < rt[j]) members.push_back(static_cast<ModelIndex::Index>(j));
  }
  return ModelIndex(rt.size(), std::move(members));
}

double log_proposal(const ModelIndex& v, std::span<const double> rt) {
  if (v.p() != rt.size()) throw ConfigError("proposal vector length does not match the model");
  auto members = v.members();
  double out = 0.0;
  std::size_t next = 0;
  for (std::size_t j = 0; j < rt.size(); ++j) {
    if (next < members.size() && members[next] == j) {
      out += std::log(rt[j]);
      ++next;
    } else {
      out += std::log1p(-rt[j]);
    }
  }
  return out;
}

double log_proposal_ratio(const ModelIndex& s, const ModelIndex& v, std::span<const double> rt) {
  if (s.p() != rt.size() || v.p() != rt.size()) {
    throw ConfigError("proposal vector length does not match the model");
  }
  auto logit = [&rt](std::size_t j) { return std::log(rt[j]) - std::log1p(-rt[j]); };
  auto a = s.members();
  auto b = v.members();
  double out = 0.0;
  std::size_t i = 0;
  std::size_t k = 0;
  while (i < a.size() || k < b.size()) {
    if (k == b.size() || (i < a.size() && a[i] < b[k])) {
      out += logit(a[i++]);  // in S only
    } else if (i == a.size() || b[k] < a[i]) {
      out -= logit(b[k++]);  // in V only
    } else {
      ++i;
      ++k;
    }
  }
  return out;
}

double accept_log_ratio(double log_kernel_s, double log_kernel_v, const ModelIndex& s,
                        const ModelIndex& v, std::span<const double> rt) {
  if (log_kernel_v == -std::numeric_limits<double>::infinity()) {
    return -std::numeric_limits<double>::infinity();
  }
  if (s == v) return 0.0;
  const double ratio = (log_kernel_v - log_kernel_s) + log_proposal_ratio(s, v, rt);
  return std::min(0.0, ratio);
}

double accept_log_ratio(PosteriorKernel& kernel, const ModelIndex& s, const ModelIndex& v,
                        std::span<const double> rt) {
  const double ls = kernel.log_kernel(s);
  const double lv = kernel.log_kernel(v);
  return accept_log_ratio(ls, lv, s, v, rt);
}

ProposalState::ProposalState(std::vector<double> r0, std::vector<double> weights, double eps)
    : r0_(std::move(r0)), weights_(std::move(weights)), eps_(eps), counts_(r0_.size(), 0) {
  if (r0_.empty()) throw ConfigError("proposal vector is empty");
  if (weights_.size() != r0_.size()) throw ConfigError("need one adaptation weight per variable");
  if (!(eps_ > 0.0 && eps_ < 0.5)) throw ConfigError("epsilon must lie in (0, 0.5)");
  for (std::size_t j = 0; j < r0_.size(); ++j) {
    if (!(r0_[j] > 0.0 && r0_[j] < 1.0)) throw ConfigError("initial proposal probabilities must lie in (0,1)");
    if (!(weights_[j] > 0.0) || !std::isfinite(weights_[j])) {
      throw ConfigError("adaptation weights must be positive");
    }
  }
  r_ = r0_;
  truncated_.resize(r0_.size());
  refresh();
}

void ProposalState::refresh() {
  for (std::size_t j = 0; j < r_.size(); ++j) truncated_[j] = std::clamp(r_[j], eps_, 1.0 - eps_);
}

double ProposalState::update(const ModelIndex& accepted) {
  if (accepted.p() != p()) throw ConfigError("model dimension does not match the proposal");
  for (auto j : accepted.members()) ++counts_[j];
  ++t_;
  const double t = static_cast<double>(t_);
  double max_step = 0.0;
  for (std::size_t j = 0; j < r_.size(); ++j) {
    const double next = (weights_[j] * r0_[j] + static_cast<double>(counts_[j])) / (weights_[j] + t);
    const double step = std::abs(next - r_[j]);
    max_step = std::max(max_step, step);
    const double bound = 2.0 / (weights_[j] + t - 1.0);
    max_step_ratio_ = std::max(max_step_ratio_, step / bound);
    if (step > bound) ++bound_violations_;
    r_[j] = next;
  }
  refresh();
  return max_step;
}

double ProposalState::pseudo_posterior_variance(std::size_t j) const {
  return r_[j] * (1.0 - r_[j]) / (weights_[j] + static_cast<double>(t_) + 1.0);
}

std::vector<double> ProposalState::recompute() const {
  std::vector<double> out(r0_.size());
  const double t = static_cast<double>(t_);
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = (weights_[j] * r0_[j] + static_cast<double>(counts_[j])) / (weights_[j] + t);
  }
  return out;
}

}  // namespace madasub
