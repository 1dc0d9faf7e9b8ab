#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "madasub/model_index.hpp"

namespace madasub {

enum class Family { kGaussian, kBinomial };

std::string to_string(Family family);
Family parse_family(const std::string& name);

// Design matrix X (n x p, column major), response y and variable names.
//
// After center(), every column of X has mean zero; for the gaussian family y
// is centered as well. A binomial response stays in {0,1}.
struct Dataset {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<std::string> names;
  Family family = Family::kGaussian;
  bool centered = false;

  std::size_t n() const { return static_cast<std::size_t>(x.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(x.cols()); }

  // Throws ConfigError when shapes, finiteness or the response domain are off.
  void validate() const;
  void center();

  // Columns of X in S, in member order.
  Eigen::MatrixXd select(const ModelIndex& s) const;
};

// Builds, validates and centers a dataset; default names are x1..xp.
Dataset make_dataset(Eigen::MatrixXd x, Eigen::VectorXd y, Family family,
                     std::vector<std::string> names = {});

}  // namespace madasub
