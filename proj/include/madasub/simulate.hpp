#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "madasub/dataset.hpp"
#include "madasub/model_index.hpp"

namespace madasub {

// Synthetic regression design with Toeplitz covariates,
// Sigma_kl = rho^|k-l|. When `randomized` is set the active set and the
// coefficients are drawn: s0 ~ U{0..max_active}, S0 a uniform subset of that
// size, beta_j ~ U(-coef_bound, coef_bound) on S0. Otherwise `beta` is used.
struct SimDesign {
  std::size_t n = 60;
  std::size_t p = 20;
  double rho = 0.9;
  std::vector<double> beta;
  Family family = Family::kGaussian;
  double sigma2 = 1.0;
  double intercept = 0.0;  // binomial linear predictor offset
  std::uint64_t seed = 1;
  bool randomized = false;
  std::size_t max_active = 10;
  double coef_bound = 2.0;

  void validate() const;
};

struct SimulatedData {
  Dataset data;  // centered
  std::vector<double> beta;
  ModelIndex active;
};

Eigen::MatrixXd toeplitz_covariance(std::size_t p, double rho);

// Lower Cholesky factor of the Toeplitz matrix; a 1e-12 ridge is added if the
// plain factorization fails. Throws NumericError if that fails too.
Eigen::MatrixXd toeplitz_cholesky(std::size_t p, double rho);

// Above this many variables rows are drawn with the AR(1) recursion
// x_1 = z_1, x_j = rho x_{j-1} + sqrt(1 - rho^2) z_j, which applies the same
// Cholesky factor without forming the p x p matrix.
inline constexpr std::size_t kDenseCholeskyLimit = 2048;

SimulatedData generate_dataset(const SimDesign& design);

// Design of the low-dimensional illustration: n = 60, p = 20, rho = 0.9,
// beta = (0.4, 0.8, 1.2, 1.6, 2.0, 0, ..., 0), sigma = 1.
SimDesign illustrative_design(std::uint64_t seed);

}  // namespace madasub
