#pragma once

#include <Eigen/Dense>

#include "madasub/dataset.hpp"
#include "madasub/marginal_likelihood.hpp"
#include "madasub/model_index.hpp"

namespace madasub {

struct FitResult {
  Eigen::VectorXd coefficients;  // intercept first, then beta_S in member order
  double max_log_likelihood = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct IrlsSettings {
  int max_iterations = 100;
  double gradient_tolerance = 1e-8;
  double coefficient_cap = 1e4;
};

// Gaussian MLE with sigma^2 = RSS/n. RSS is floored at 1e-12 * sum(y^2) so
// interpolating models keep a finite likelihood. Throws SingularFitError on a
// collinear X_S or |S| >= n - 1.
FitResult fit_gaussian(const CrossProducts& xp, const ModelIndex& s);
FitResult fit_gaussian(const Dataset& data, const ModelIndex& s);

// Logistic MLE with intercept via Newton/IRLS with step halving. Throws
// SeparationError once the coefficient norm exceeds the cap and
// SingularFitError on a singular Hessian. A fit that runs out of iterations
// is returned with converged = false.
FitResult fit_logistic(const Dataset& data, const ModelIndex& s,
                       const IrlsSettings& settings = {});

// -2 max log-likelihood + (log n + 2 gamma log p) |S|. Only the |S| slopes are
// penalized; the intercept (and sigma^2) are not.
double ebic(const Dataset& data, const ModelIndex& s, double gamma);
double ebic_from_log_likelihood(double max_log_likelihood, std::size_t n, std::size_t p,
                                std::size_t size, double gamma);

}  // namespace madasub
