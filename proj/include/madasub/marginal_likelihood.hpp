#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "madasub/dataset.hpp"
#include "madasub/model_index.hpp"

namespace madasub {

// Prior on beta_S given sigma^2: N(0, sigma^2 g V_S) with
//   g-prior: V_S = (X_S^T X_S)^{-1}
//   ridge:   V_S = I
// Jeffreys prior on sigma^2 and a flat prior on the intercept in both cases.
struct CoefficientPriorSpec {
  enum class Kind { kGPrior, kRidge };
  Kind kind = Kind::kGPrior;
  double g = 1.0;

  void validate() const;
  std::string describe() const;
};

// Cross products of a centered gaussian dataset. The full Gram matrix is
// precomputed when p is at most gram_limit; otherwise X_S^T X_S is formed
// from the selected columns on demand.
class CrossProducts {
 public:
  explicit CrossProducts(const Dataset& data, std::size_t gram_limit = 512);

  Eigen::MatrixXd gram(const ModelIndex& s) const;
  Eigen::VectorXd xty(const ModelIndex& s) const;
  double yty() const { return yty_; }
  std::size_t n() const { return data_->n(); }
  std::size_t p() const { return data_->p(); }

 private:
  const Dataset* data_;
  std::optional<Eigen::MatrixXd> full_gram_;
  Eigen::VectorXd full_xty_;
  double yty_ = 0.0;
};

struct LeastSquaresSolution {
  bool singular = false;
  Eigen::VectorXd beta;  // slopes only; the intercept is zero on centered data
  double rss = 0.0;
};

// Relative pivot threshold below which X_S^T X_S is treated as singular.
inline constexpr double kSingularityThreshold = 1e-10;

// OLS on a centered dataset through a pivoted LDL^T factorization of
// X_S^T X_S. Singular when a pivot falls below kSingularityThreshold times the
// largest diagonal entry, or when |S| >= n - 1.
LeastSquaresSolution solve_least_squares(const CrossProducts& xp, const ModelIndex& s);

// log pi(y | X, S) - log pi(y | X, {}) under the conjugate normal prior.
// Returns -infinity when the g-prior is undefined for S (singular X_S^T X_S or
// |S| >= n - 1). Requires a centered gaussian dataset.
double log_marginal_conjugate_linear(const CrossProducts& xp, const ModelIndex& s,
                                     const CoefficientPriorSpec& prior);
double log_marginal_conjugate_linear(const Dataset& data, const ModelIndex& s,
                                     const CoefficientPriorSpec& prior);

}  // namespace madasub
