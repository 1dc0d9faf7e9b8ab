#include "madasub/kernel.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "madasub/errors.hpp"
#include "madasub/glm.hpp"

namespace madasub {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

ConjugateLinearKernel::ConjugateLinearKernel(std::shared_ptr<const Dataset> data,
                                             CoefficientPriorSpec coefficient_prior,
                                             ModelPriorSpec model_prior)
    : data_(std::move(data)),
      xp_(*data_),
      coefficient_prior_(coefficient_prior),
      model_prior_(model_prior) {
  coefficient_prior_.validate();
  model_prior_.validate();
  log_prior_null_ = log_model_prior(ModelIndex(data_->p()), model_prior_);
}

double ConjugateLinearKernel::evaluate(const ModelIndex& s) const {
  const double log_bf = log_marginal_conjugate_linear(xp_, s, coefficient_prior_);
  if (log_bf == kNegInf) return kNegInf;
  return log_bf + (log_model_prior(s, model_prior_) - log_prior_null_);
}

std::string ConjugateLinearKernel::describe() const {
  return "conjugate-linear/" + coefficient_prior_.describe() + "/" + model_prior_.describe();
}

EbicKernel::EbicKernel(std::shared_ptr<const Dataset> data, double gamma)
    : data_(std::move(data)), gamma_(gamma) {
  if (!(gamma_ >= 0.0 && gamma_ <= 1.0)) throw ConfigError("gamma must lie in [0,1]");
  if (data_->family == Family::kGaussian) xp_ = std::make_unique<CrossProducts>(*data_);
}

double EbicKernel::evaluate(const ModelIndex& s) const {
  try {
    FitResult fit;
    if (xp_) {
      fit = fit_gaussian(*xp_, s);
    } else {
      fit = fit_logistic(*data_, s);
      if (!fit.converged) return kNegInf;
    }
    return -0.5 * ebic_from_log_likelihood(fit.max_log_likelihood, data_->n(), data_->p(),
                                           s.size(), gamma_);
  } catch (const SingularFitError&) {
    return kNegInf;
  } catch (const SeparationError&) {
    return kNegInf;
  }
}

std::string EbicKernel::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "ebic/" << to_string(data_->family) << "(gamma=" << gamma_ << ")";
  return os.str();
}

FunctionKernel::FunctionKernel(std::size_t p, std::function<double(const ModelIndex&)> fn,
                               std::string name)
    : p_(p), fn_(std::move(fn)), name_(std::move(name)) {}

bool SharedKernelCache::lookup(const ModelIndex& s, double& value) const {
  std::shared_lock lock(mutex_);
  auto it = map_.find(s);
  if (it == map_.end()) return false;
  value = it->second;
  return true;
}

void SharedKernelCache::insert_if_absent(const ModelIndex& s, double value) {
  std::unique_lock lock(mutex_);
  if (max_entries_ != 0 && map_.size() >= max_entries_) return;
  map_.try_emplace(s, value);
}

std::size_t SharedKernelCache::size() const {
  std::shared_lock lock(mutex_);
  return map_.size();
}

PosteriorKernel::PosteriorKernel(std::shared_ptr<const LogKernel> base, std::size_t max_entries)
    : base_(std::move(base)), max_entries_(max_entries) {
  if (!base_) throw ConfigError("posterior kernel needs a base kernel");
}

PosteriorKernel::PosteriorKernel(std::shared_ptr<const LogKernel> base,
                                 std::shared_ptr<SharedKernelCache> shared)
    : base_(std::move(base)), shared_(std::move(shared)) {
  if (!base_) throw ConfigError("posterior kernel needs a base kernel");
}

double PosteriorKernel::log_kernel(const ModelIndex& s) {
  if (s.p() != base_->p()) throw ConfigError("model dimension does not match the kernel");
  double value;
  if (shared_) {
    if (shared_->lookup(s, value)) return value;
  } else if (auto it = local_.find(s); it != local_.end()) {
    return it->second;
  }
  value = base_->evaluate(s);
  ++evaluations_;
  if (std::isnan(value) || value == std::numeric_limits<double>::infinity()) {
    throw NumericError("kernel returned a non-finite value for model " + s.to_string());
  }
  if (shared_) {
    shared_->insert_if_absent(s, value);
  } else if (max_entries_ == 0 || local_.size() < max_entries_) {
    local_.emplace(s, value);
  }
  return value;
}

PosteriorKernel PosteriorKernel::fork() const {
  if (shared_) return PosteriorKernel(base_, shared_);
  return PosteriorKernel(base_, max_entries_);
}

std::size_t PosteriorKernel::cache_size() const {
  return shared_ ? shared_->size() : local_.size();
}

}  // namespace madasub
