#include "madasub/glm.hpp"

#include <cmath>
#include <numbers>

#include "madasub/errors.hpp"

namespace madasub {

namespace {

// |eta| beyond this gives fitted probabilities within 1e-13 of 0 or 1.
constexpr double kSeparationEta = 30.0;

constexpr double kRssFloor = 1e-12;

// log(1 + exp(eta)) without overflow.
double softplus(double eta) {
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

double sigmoid(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

Eigen::MatrixXd with_intercept(const Dataset& data, const ModelIndex& s) {
  Eigen::MatrixXd z(data.x.rows(), static_cast<Eigen::Index>(s.size()) + 1);
  z.col(0).setOnes();
  Eigen::Index c = 1;
  for (auto j : s.members()) z.col(c++) = data.x.col(j);
  return z;
}

double logistic_log_likelihood(const Eigen::VectorXd& y, const Eigen::VectorXd& eta) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) ll += y[i] * eta[i] - softplus(eta[i]);
  return ll;
}

}  // namespace

FitResult fit_gaussian(const CrossProducts& xp, const ModelIndex& s) {
  const LeastSquaresSolution ls = solve_least_squares(xp, s);
  if (ls.singular) {
    throw SingularFitError("X_S^T X_S is singular for model " + s.to_string());
  }
  const double n = static_cast<double>(xp.n());
  const double rss = std::max(ls.rss, kRssFloor * xp.yty());
  if (!(rss > 0.0)) throw NumericError("response has zero variance");

  FitResult fit;
  fit.coefficients = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.size()) + 1);
  if (!s.empty()) fit.coefficients.tail(static_cast<Eigen::Index>(s.size())) = ls.beta;
  fit.max_log_likelihood = -0.5 * n * (std::log(2.0 * std::numbers::pi * rss / n) + 1.0);
  fit.converged = true;
  fit.iterations = 1;
  return fit;
}

FitResult fit_gaussian(const Dataset& data, const ModelIndex& s) {
  return fit_gaussian(CrossProducts(data, 0), s);
}

FitResult fit_logistic(const Dataset& data, const ModelIndex& s, const IrlsSettings& settings) {
  if (data.family != Family::kBinomial) throw ConfigError("logistic fit requires a binomial response");
  const Eigen::MatrixXd z = with_intercept(data, s);
  const Eigen::VectorXd& y = data.y;
  const Eigen::Index dim = z.cols();

  const double ybar = y.mean();
  if (ybar <= 0.0 || ybar >= 1.0) {
    throw SeparationError("response is constant; the intercept has no finite MLE");
  }
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(dim);
  coef[0] = std::log(ybar / (1.0 - ybar));

  Eigen::VectorXd eta = z * coef;
  double ll = logistic_log_likelihood(y, eta);
  FitResult fit;
  for (int it = 0; it < settings.max_iterations; ++it) {
    Eigen::VectorXd mu(eta.size());
    Eigen::VectorXd w(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      mu[i] = sigmoid(eta[i]);
      w[i] = mu[i] * (1.0 - mu[i]);
    }
    const Eigen::VectorXd grad = z.transpose() * (y - mu);
    fit.iterations = it;
    const Eigen::MatrixXd hess = z.transpose() * w.asDiagonal() * z;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
    const double scale = hess.diagonal().maxCoeff();
    if (ldlt.info() != Eigen::Success ||
        ldlt.vectorD().cwiseAbs().minCoeff() <= kSingularityThreshold * scale) {
      // Weights collapsing to zero is a symptom of separation, not collinearity.
      if (eta.lpNorm<Eigen::Infinity>() > kSeparationEta) {
        throw SeparationError("fitted probabilities numerically 0 or 1 for model " + s.to_string());
      }
      throw SingularFitError("logistic Hessian is singular for model " + s.to_string());
    }
    const Eigen::VectorXd step = ldlt.solve(grad);
    // Under separation the gradient vanishes too while Newton steps stay O(1),
    // so a small gradient alone is not enough.
    if (grad.lpNorm<Eigen::Infinity>() <= settings.gradient_tolerance &&
        step.lpNorm<Eigen::Infinity>() <= 1e-6 * (1.0 + coef.lpNorm<Eigen::Infinity>())) {
      fit.converged = true;
      break;
    }

    // Newton step with halving until the log-likelihood does not decrease.
    double t = 1.0;
    Eigen::VectorXd next = coef + step;
    Eigen::VectorXd next_eta = z * next;
    double next_ll = logistic_log_likelihood(y, next_eta);
    for (int h = 0; h < 30 && next_ll < ll; ++h) {
      t *= 0.5;
      next = coef + t * step;
      next_eta = z * next;
      next_ll = logistic_log_likelihood(y, next_eta);
    }
    coef = std::move(next);
    eta = std::move(next_eta);
    ll = next_ll;
    if (coef.norm() > settings.coefficient_cap) {
      throw SeparationError("logistic coefficients diverge for model " + s.to_string());
    }
    fit.iterations = it + 1;
  }
  if (!fit.converged && eta.lpNorm<Eigen::Infinity>() > kSeparationEta) {
    throw SeparationError("fitted probabilities numerically 0 or 1 for model " + s.to_string());
  }
  fit.coefficients = coef;
  fit.max_log_likelihood = ll;
  return fit;
}

double ebic_from_log_likelihood(double max_log_likelihood, std::size_t n, std::size_t p,
                                std::size_t size, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0,1]");
  const double penalty = std::log(static_cast<double>(n)) + 2.0 * gamma * std::log(static_cast<double>(p));
  return -2.0 * max_log_likelihood + penalty * static_cast<double>(size);
}

double ebic(const Dataset& data, const ModelIndex& s, double gamma) {
  const FitResult fit = data.family == Family::kGaussian ? fit_gaussian(data, s) : fit_logistic(data, s);
  return ebic_from_log_likelihood(fit.max_log_likelihood, data.n(), data.p(), s.size(), gamma);
}

}  // namespace madasub
