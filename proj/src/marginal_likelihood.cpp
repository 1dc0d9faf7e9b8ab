#include "madasub/marginal_likelihood.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "madasub/errors.hpp"

namespace madasub {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

void CoefficientPriorSpec::validate() const {
  if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("g must be a positive finite number");
}

std::string CoefficientPriorSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << (kind == Kind::kGPrior ? "g-prior" : "ridge") << "(g=" << g << ")";
  return os.str();
}

CrossProducts::CrossProducts(const Dataset& data, std::size_t gram_limit) : data_(&data) {
  if (data.family != Family::kGaussian) {
    throw ConfigError("conjugate linear kernel requires a gaussian response");
  }
  if (!data.centered) throw ConfigError("conjugate linear kernel requires a centered dataset");
  if (data.p() <= gram_limit) full_gram_ = data.x.transpose() * data.x;
  full_xty_ = data.x.transpose() * data.y;
  yty_ = data.y.squaredNorm();
}

Eigen::MatrixXd CrossProducts::gram(const ModelIndex& s) const {
  const auto k = static_cast<Eigen::Index>(s.size());
  const auto members = s.members();
  Eigen::MatrixXd out(k, k);
  if (full_gram_) {
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) out(a, b) = (*full_gram_)(members[a], members[b]);
    }
    return out;
  }
  const Eigen::MatrixXd xs = data_->select(s);
  out.noalias() = xs.transpose() * xs;
  return out;
}

Eigen::VectorXd CrossProducts::xty(const ModelIndex& s) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(s.size()));
  Eigen::Index c = 0;
  for (auto j : s.members()) out[c++] = full_xty_[j];
  return out;
}

LeastSquaresSolution solve_least_squares(const CrossProducts& xp, const ModelIndex& s) {
  LeastSquaresSolution out;
  out.rss = xp.yty();
  if (s.empty()) return out;
  if (s.size() + 1 >= xp.n()) {
    out.singular = true;
    return out;
  }
  const Eigen::MatrixXd gram = xp.gram(s);
  const Eigen::VectorXd b = xp.xty(s);
  const double scale = gram.diagonal().maxCoeff();
  if (!(scale > 0.0)) {
    out.singular = true;
    return out;
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success ||
      ldlt.vectorD().cwiseAbs().minCoeff() <= kSingularityThreshold * scale) {
    out.singular = true;
    return out;
  }
  out.beta = ldlt.solve(b);
  out.rss = std::max(0.0, xp.yty() - b.dot(out.beta));
  return out;
}

double log_marginal_conjugate_linear(const CrossProducts& xp, const ModelIndex& s,
                                     const CoefficientPriorSpec& prior) {
  prior.validate();
  if (s.empty()) return 0.0;
  const double n = static_cast<double>(xp.n());
  const double k = static_cast<double>(s.size());
  const double g = prior.g;
  const double tss = xp.yty();
  if (!(tss > 0.0)) throw NumericError("response has zero variance");

  double value;
  if (prior.kind == CoefficientPriorSpec::Kind::kGPrior) {
    const LeastSquaresSolution ls = solve_least_squares(xp, s);
    if (ls.singular) return kNegInf;
    // BF = (1+g)^((n-1-k)/2) / (1 + g RSS/TSS)^((n-1)/2)
    value = 0.5 * (n - 1.0 - k) * std::log1p(g) -
            0.5 * (n - 1.0) * std::log1p(g * ls.rss / tss);
  } else {
    // y_c | sigma^2 ~ N(0, sigma^2 (I + g X_S X_S^T)) on the centered subspace.
    const Eigen::MatrixXd gram = xp.gram(s);
    const Eigen::VectorXd b = xp.xty(s);
    Eigen::MatrixXd m = g * gram;
    m.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) throw NumericError("ridge system is not positive definite");
    const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double quad = tss - g * b.dot(llt.solve(b));
    if (!(quad > 0.0)) return kNegInf;
    value = -0.5 * log_det - 0.5 * (n - 1.0) * (std::log(quad) - std::log(tss));
  }
  if (std::isnan(value)) {
    throw NumericError("non-finite log marginal likelihood for model " + s.to_string());
  }
  return value;
}

double log_marginal_conjugate_linear(const Dataset& data, const ModelIndex& s,
                                     const CoefficientPriorSpec& prior) {
  return log_marginal_conjugate_linear(CrossProducts(data, 0), s, prior);
}

}  // namespace madasub
