#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "madasub/dataset.hpp"
#include "madasub/marginal_likelihood.hpp"
#include "madasub/model_index.hpp"

namespace oracle {

using madasub::ModelIndex;

inline madasub::Dataset toy(int variant) {
  Eigen::MatrixXd x(8, 2);
  Eigen::VectorXd y(8);
  if (variant == 0) {
    x << 0.3, 1.2, -1.1, 0.4, 0.8, -0.7, 1.9, 0.1, -0.4, -1.5, 0.2, 0.9, -1.6, 0.3, 0.5, -0.6;
    y << 1.1, -1.4, 0.9, 2.7, -0.2, 0.6, -2.3, 0.8;
  } else {
    x << 1.0, 0.5, 2.0, -0.3, 3.0, 0.8, 4.0, -1.2, 5.0, 0.1, 6.0, 0.7, 7.0, -0.4, 8.0, 0.2;
    y << 0.4, 0.1, 0.9, 0.7, 1.8, 1.2, 1.9, 2.6;
  }
  return madasub::make_dataset(x, y, madasub::Family::kGaussian);
}

// Integrates mu out analytically (flat prior, centered columns), then beta_j
// and u = log sigma^2 numerically (Jeffreys prior: dsigma^2/sigma^2 = du). The
// u window of +-25 around log(yy/n) leaves tails far below double precision.
// The constant (2 pi)^{-(n-1)/2} n^{-1/2} is shared by every model and dropped.
inline double log_evidence_single(const madasub::Dataset& d, int j, const madasub::CoefficientPriorSpec& prior) {
  const double n = static_cast<double>(d.n());
  const Eigen::VectorXd x = d.x.col(j);
  const double xx = x.squaredNorm();
  const double xy = x.dot(d.y);
  const double yy = d.y.squaredNorm();
  const double scale = prior.kind == madasub::CoefficientPriorSpec::Kind::kGPrior ? prior.g / xx : prior.g;
  auto inner = [&](double u) {
    const double s2 = std::exp(u);
    auto f = [&](double b) {
      const double q = yy - 2.0 * b * xy + b * b * xx;
      const double v = s2 * scale;
      return std::exp(-0.5 * (n - 1.0) * u - q / (2.0 * s2)) * std::exp(-b * b / (2.0 * v)) /
             std::sqrt(2.0 * M_PI * v);
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 15, 1e-13);
  };
  const double c = std::log(yy / n);
  return std::log(boost::math::quadrature::gauss_kronrod<double, 61>::integrate(inner, c - 25.0, c + 25.0, 15, 1e-12));
}

inline double log_evidence_null(const madasub::Dataset& d) {
  const double n = static_cast<double>(d.n());
  const double yy = d.y.squaredNorm();
  auto f = [&](double u) { return std::exp(-0.5 * (n - 1.0) * u - yy / (2.0 * std::exp(u))); };
  const double c = std::log(yy / n);
  return std::log(boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, c - 25.0, c + 25.0, 15, 1e-13));
}

// Direct evaluation of the logistic log-likelihood at (intercept, beta).
inline double logistic_loglik(const madasub::Dataset& d, const ModelIndex& s, const Eigen::VectorXd& c) {
  const Eigen::MatrixXd xs = d.select(s);
  double ll = 0.0;
  for (Eigen::Index i = 0; i < xs.rows(); ++i) {
    double eta = c[0];
    for (Eigen::Index k = 0; k < xs.cols(); ++k) eta += xs(i, k) * c[k + 1];
    ll += d.y[i] * eta - std::log1p(std::exp(eta));
  }
  return ll;
}

inline Eigen::VectorXd logistic_gradient(const madasub::Dataset& d, const ModelIndex& s,
                                  const Eigen::VectorXd& c) {
  Eigen::MatrixXd z(d.n(), s.size() + 1);
  z.col(0).setOnes();
  z.rightCols(s.size()) = d.select(s);
  const Eigen::VectorXd eta = z * c;
  Eigen::VectorXd mu(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) mu[i] = 1.0 / (1.0 + std::exp(-eta[i]));
  return z.transpose() * (d.y - mu);
}

}  // namespace oracle
