#include "madasub/dataset.hpp"

#include <cmath>

#include "madasub/errors.hpp"

namespace madasub {

std::string to_string(Family family) {
  return family == Family::kGaussian ? "gaussian" : "binomial";
}

Family parse_family(const std::string& name) {
  if (name == "gaussian") return Family::kGaussian;
  if (name == "binomial") return Family::kBinomial;
  throw ConfigError("unknown family '" + name + "' (expected gaussian or binomial)");
}

void Dataset::validate() const {
  if (x.rows() < 2) throw ConfigError("dataset needs n >= 2 observations");
  if (x.cols() < 1) throw ConfigError("dataset needs p >= 1 covariates");
  if (y.size() != x.rows()) throw ConfigError("response length does not match n");
  if (names.size() != p()) throw ConfigError("expected one name per covariate");
  if (!x.allFinite()) throw ConfigError("design matrix has non-finite entries");
  if (!y.allFinite()) throw ConfigError("response has non-finite entries");
  if (family == Family::kBinomial) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y[i] != 0.0 && y[i] != 1.0) {
        throw ConfigError("binomial response must be 0 or 1 (row " +
                          std::to_string(i + 1) + ")");
      }
    }
  }
}

void Dataset::center() {
  x.rowwise() -= x.colwise().mean();
  if (family == Family::kGaussian) y.array() -= y.mean();
  centered = true;
}

Eigen::MatrixXd Dataset::select(const ModelIndex& s) const {
  Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(s.size()));
  Eigen::Index c = 0;
  for (auto j : s.members()) out.col(c++) = x.col(j);
  return out;
}

Dataset make_dataset(Eigen::MatrixXd x, Eigen::VectorXd y, Family family,
                     std::vector<std::string> names) {
  if (names.empty()) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) names.push_back("x" + std::to_string(j + 1));
  }
  Dataset d{std::move(x), std::move(y), std::move(names), family, false};
  d.validate();
  d.center();
  return d;
}

}  // namespace madasub
