#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "madasub/dataset.hpp"
#include "madasub/marginal_likelihood.hpp"
#include "madasub/model_index.hpp"
#include "madasub/model_prior.hpp"

namespace madasub {

// Unnormalized log posterior over models. Implementations are immutable after
// construction, so evaluate() may be called concurrently. -infinity marks a
// model with zero posterior mass and is a legal return value.
class LogKernel {
 public:
  virtual ~LogKernel() = default;
  virtual std::size_t p() const = 0;
  virtual double evaluate(const ModelIndex& s) const = 0;
  virtual std::string describe() const = 0;
};

// log BF(S : {}) + log pi(S) - log pi({}), i.e. log posterior odds against the
// null model under the conjugate normal prior.
class ConjugateLinearKernel final : public LogKernel {
 public:
  ConjugateLinearKernel(std::shared_ptr<const Dataset> data, CoefficientPriorSpec coefficient_prior,
                        ModelPriorSpec model_prior);

  std::size_t p() const override { return data_->p(); }
  double evaluate(const ModelIndex& s) const override;
  std::string describe() const override;

 private:
  std::shared_ptr<const Dataset> data_;
  CrossProducts xp_;
  CoefficientPriorSpec coefficient_prior_;
  ModelPriorSpec model_prior_;
  double log_prior_null_;
};

// -EBIC_gamma(S) / 2 for the dataset's family. Fits that fail (singular X_S,
// separation, no convergence) get -infinity.
class EbicKernel final : public LogKernel {
 public:
  EbicKernel(std::shared_ptr<const Dataset> data, double gamma);

  std::size_t p() const override { return data_->p(); }
  double evaluate(const ModelIndex& s) const override;
  std::string describe() const override;

 private:
  std::shared_ptr<const Dataset> data_;
  std::unique_ptr<CrossProducts> xp_;
  double gamma_;
};

// Wraps an arbitrary function; used for constructed targets in tests and
// diagnostics. The function must be safe to call concurrently.
class FunctionKernel final : public LogKernel {
 public:
  FunctionKernel(std::size_t p, std::function<double(const ModelIndex&)> fn,
                 std::string name = "function");

  std::size_t p() const override { return p_; }
  double evaluate(const ModelIndex& s) const override { return fn_(s); }
  std::string describe() const override { return name_; }

 private:
  std::size_t p_;
  std::function<double(const ModelIndex&)> fn_;
  std::string name_;
};

// Cache that several chains may share. Insertion keeps the first value
// stored for a key; every value for a key is bit-identical anyway because
// the base kernel is deterministic.
class SharedKernelCache {
 public:
  explicit SharedKernelCache(std::size_t max_entries = 0) : max_entries_(max_entries) {}

  bool lookup(const ModelIndex& s, double& value) const;
  void insert_if_absent(const ModelIndex& s, double value);
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<ModelIndex, double, ModelIndexHash> map_;
  std::size_t max_entries_;
};

// Cached front end of a LogKernel. One instance per chain; the local cache is
// unbounded unless max_entries > 0, after which new values are computed but
// not stored.
class PosteriorKernel {
 public:
  explicit PosteriorKernel(std::shared_ptr<const LogKernel> base, std::size_t max_entries = 0);
  PosteriorKernel(std::shared_ptr<const LogKernel> base, std::shared_ptr<SharedKernelCache> shared);

  // Throws NumericError if the base kernel produces NaN or +infinity.
  double log_kernel(const ModelIndex& s);

  // Fresh instance for another chain: empty local cache, or the same shared
  // cache when this one uses one.
  PosteriorKernel fork() const;

  std::size_t p() const { return base_->p(); }
  std::string describe() const { return base_->describe(); }
  const LogKernel& base() const { return *base_; }
  std::shared_ptr<const LogKernel> base_ptr() const { return base_; }

  // Number of calls that reached the base kernel.
  std::size_t evaluations() const { return evaluations_; }
  std::size_t cache_size() const;

 private:
  std::shared_ptr<const LogKernel> base_;
  std::shared_ptr<SharedKernelCache> shared_;
  std::unordered_map<ModelIndex, double, ModelIndexHash> local_;
  std::size_t max_entries_ = 0;
  std::size_t evaluations_ = 0;
};

}  // namespace madasub
