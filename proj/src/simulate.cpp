#include "madasub/simulate.hpp"

#include <cmath>
#include <numeric>

#include "madasub/errors.hpp"
#include "madasub/rng.hpp"

namespace madasub {

void SimDesign::validate() const {
  if (n < 2 || p < 1) throw ConfigError("simulation needs n >= 2 and p >= 1");
  if (!(std::abs(rho) < 1.0)) throw ConfigError("Toeplitz correlation must satisfy |rho| < 1");
  if (!randomized && beta.size() != p) throw ConfigError("beta must have p entries");
  if (!(sigma2 > 0.0)) throw ConfigError("noise variance must be positive");
  if (randomized && max_active > p) throw ConfigError("max active set size exceeds p");
}

Eigen::MatrixXd toeplitz_covariance(std::size_t p, double rho) {
  const auto pp = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd sigma(pp, pp);
  for (Eigen::Index k = 0; k < pp; ++k) {
    for (Eigen::Index l = 0; l < pp; ++l) {
      sigma(k, l) = std::pow(rho, static_cast<double>(std::abs(k - l)));
    }
  }
  return sigma;
}

Eigen::MatrixXd toeplitz_cholesky(std::size_t p, double rho) {
  Eigen::MatrixXd sigma = toeplitz_covariance(p, rho);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    sigma.diagonal().array() += 1e-12;
    llt.compute(sigma);
    if (llt.info() != Eigen::Success) throw NumericError("Toeplitz covariance is not positive definite");
  }
  return llt.matrixL();
}

SimulatedData generate_dataset(const SimDesign& design) {
  design.validate();
  Rng rng(design.seed);
  const std::size_t p = design.p;

  std::vector<double> beta = design.beta;
  if (design.randomized) {
    beta.assign(p, 0.0);
    const std::size_t s0 = rng.index(design.max_active + 1);
    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < s0; ++i) {  // partial Fisher-Yates
      std::swap(order[i], order[i + rng.index(p - i)]);
    }
    for (std::size_t i = 0; i < s0; ++i) {
      beta[order[i]] = design.coef_bound * (2.0 * rng.uniform() - 1.0);
    }
  }
  std::vector<ModelIndex::Index> active;
  for (std::size_t j = 0; j < p; ++j) {
    if (beta[j] != 0.0) active.push_back(static_cast<ModelIndex::Index>(j));
  }

  const auto n = static_cast<Eigen::Index>(design.n);
  const auto pp = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd x(n, pp);
  if (p <= kDenseCholeskyLimit) {
    const Eigen::MatrixXd chol = toeplitz_cholesky(p, design.rho);
    Eigen::VectorXd z(pp);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < pp; ++j) z[j] = rng.normal();
      x.row(i) = (chol.triangularView<Eigen::Lower>() * z).transpose();
    }
  } else {
    const double innovation = std::sqrt(1.0 - design.rho * design.rho);
    for (Eigen::Index i = 0; i < n; ++i) {
      double prev = rng.normal();
      x(i, 0) = prev;
      for (Eigen::Index j = 1; j < pp; ++j) {
        prev = design.rho * prev + innovation * rng.normal();
        x(i, j) = prev;
      }
    }
  }

  const Eigen::Map<const Eigen::VectorXd> b(beta.data(), pp);
  const Eigen::VectorXd eta = x * b;
  Eigen::VectorXd y(n);
  if (design.family == Family::kGaussian) {
    const double sd = std::sqrt(design.sigma2);
    for (Eigen::Index i = 0; i < n; ++i) y[i] = eta[i] + sd * rng.normal();
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double prob = 1.0 / (1.0 + std::exp(-(design.intercept + eta[i])));
      y[i] = rng.uniform() < prob ? 1.0 : 0.0;
    }
  }

  SimulatedData out{make_dataset(std::move(x), std::move(y), design.family), std::move(beta),
                    ModelIndex(p, std::move(active))};
  return out;
}

SimDesign illustrative_design(std::uint64_t seed) {
  SimDesign d;
  d.n = 60;
  d.p = 20;
  d.rho = 0.9;
  d.beta.assign(20, 0.0);
  const double lead[] = {0.4, 0.8, 1.2, 1.6, 2.0};
  for (int j = 0; j < 5; ++j) d.beta[j] = lead[j];
  d.sigma2 = 1.0;
  d.seed = seed;
  return d;
}

}  // namespace madasub
