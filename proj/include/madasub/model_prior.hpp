#pragma once

#include <cstddef>
#include <string>

#include "madasub/model_index.hpp"

namespace madasub {

// Prior over the model space.
//
//   bernoulli(omega)      omega^|S| (1-omega)^(p-|S|)
//   beta-binomial(a, b)   B(a+|S|, b+p-|S|) / B(a, b)
//   ebic-gamma(gamma)     C(p,|S|)^(-gamma), unnormalized
//   uniform               2^-p
struct ModelPriorSpec {
  enum class Kind { kBernoulli, kBetaBinomial, kEbicGamma, kUniform };

  Kind kind = Kind::kUniform;
  double omega = 0.5;
  double a = 1.0;
  double b = 1.0;
  double gamma = 1.0;

  static ModelPriorSpec bernoulli(double omega);
  static ModelPriorSpec beta_binomial(double a, double b);
  static ModelPriorSpec ebic_gamma(double gamma);
  static ModelPriorSpec uniform();

  // Throws ConfigError if a parameter is outside its domain.
  void validate() const;
  std::string describe() const;
};

ModelPriorSpec::Kind parse_model_prior_kind(const std::string& name);

// log pi(S). Bernoulli, beta-binomial and uniform are normalized; ebic-gamma
// returns -gamma log C(p,|S|) with the normalizer dropped.
double log_model_prior(const ModelIndex& s, const ModelPriorSpec& spec);

// Same value but as a function of the model size only.
double log_model_prior_by_size(std::size_t size, std::size_t p, const ModelPriorSpec& spec);

// log of the sum of exp(log_model_prior) over all 2^p models; zero for the
// normalized kinds.
double log_model_prior_normalizer(std::size_t p, const ModelPriorSpec& spec);

double log_binomial_coefficient(std::size_t n, std::size_t k);

}  // namespace madasub
