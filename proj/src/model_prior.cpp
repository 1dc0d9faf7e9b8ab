#include "madasub/model_prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "madasub/errors.hpp"

namespace madasub {

namespace {

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace

ModelPriorSpec ModelPriorSpec::bernoulli(double omega) {
  ModelPriorSpec s;
  s.kind = Kind::kBernoulli;
  s.omega = omega;
  s.validate();
  return s;
}

ModelPriorSpec ModelPriorSpec::beta_binomial(double a, double b) {
  ModelPriorSpec s;
  s.kind = Kind::kBetaBinomial;
  s.a = a;
  s.b = b;
  s.validate();
  return s;
}

ModelPriorSpec ModelPriorSpec::ebic_gamma(double gamma) {
  ModelPriorSpec s;
  s.kind = Kind::kEbicGamma;
  s.gamma = gamma;
  s.validate();
  return s;
}

ModelPriorSpec ModelPriorSpec::uniform() { return ModelPriorSpec{}; }

void ModelPriorSpec::validate() const {
  switch (kind) {
    case Kind::kBernoulli:
      if (!(omega > 0.0 && omega < 1.0)) throw ConfigError("omega must lie in (0,1)");
      break;
    case Kind::kBetaBinomial:
      if (!(a > 0.0 && b > 0.0)) throw ConfigError("beta-binomial a and b must be positive");
      break;
    case Kind::kEbicGamma:
      if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0,1]");
      break;
    case Kind::kUniform:
      break;
  }
}

std::string ModelPriorSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::kBernoulli: os << "bernoulli(omega=" << omega << ")"; break;
    case Kind::kBetaBinomial: os << "beta-binomial(a=" << a << ",b=" << b << ")"; break;
    case Kind::kEbicGamma: os << "ebic-gamma(gamma=" << gamma << ")"; break;
    case Kind::kUniform: os << "uniform"; break;
  }
  return os.str();
}

ModelPriorSpec::Kind parse_model_prior_kind(const std::string& name) {
  if (name == "bernoulli") return ModelPriorSpec::Kind::kBernoulli;
  if (name == "beta-binomial") return ModelPriorSpec::Kind::kBetaBinomial;
  if (name == "ebic-gamma") return ModelPriorSpec::Kind::kEbicGamma;
  if (name == "uniform") return ModelPriorSpec::Kind::kUniform;
  throw ConfigError("unknown model prior '" + name + "'");
}

double log_binomial_coefficient(std::size_t n, std::size_t k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
}

double log_model_prior_by_size(std::size_t size, std::size_t p, const ModelPriorSpec& spec) {
  spec.validate();
  if (size > p) throw ConfigError("model size exceeds p");
  const double k = static_cast<double>(size);
  const double pd = static_cast<double>(p);
  switch (spec.kind) {
    case ModelPriorSpec::Kind::kBernoulli:
      return k * std::log(spec.omega) + (pd - k) * std::log1p(-spec.omega);
    case ModelPriorSpec::Kind::kBetaBinomial:
      return log_beta(spec.a + k, spec.b + pd - k) - log_beta(spec.a, spec.b);
    case ModelPriorSpec::Kind::kEbicGamma:
      return spec.gamma == 0.0 ? 0.0 : -spec.gamma * log_binomial_coefficient(p, size);
    case ModelPriorSpec::Kind::kUniform:
      return -pd * std::log(2.0);
  }
  return 0.0;
}

double log_model_prior(const ModelIndex& s, const ModelPriorSpec& spec) {
  return log_model_prior_by_size(s.size(), s.p(), spec);
}

double log_model_prior_normalizer(std::size_t p, const ModelPriorSpec& spec) {
  spec.validate();
  if (spec.kind != ModelPriorSpec::Kind::kEbicGamma) return 0.0;
  // sum_k C(p,k) * C(p,k)^-gamma, in log space
  std::vector<double> terms(p + 1);
  for (std::size_t k = 0; k <= p; ++k) {
    terms[k] = (1.0 - spec.gamma) * log_binomial_coefficient(p, k);
  }
  const double m = *std::max_element(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - m);
  return m + std::log(acc);
}

}  // namespace madasub
