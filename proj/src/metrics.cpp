#include "covdlm/metrics.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "covdlm/errors.hpp"

namespace covdlm {

Vector msse(std::span<const Vector> errors, std::span<const SymMatrix> covs) {
  if (errors.size() != covs.size()) {
    throw Error(ErrorKind::DimensionMismatch, "errors and covariances are not aligned");
  }
  if (errors.empty()) return Vector();
  const Index p = errors.front().size();
  Vector total = Vector::Zero(p);
  for (std::size_t t = 0; t < errors.size(); ++t) {
    total += standardized_errors(errors[t], covs[t]).cwiseAbs2();
  }
  return total / static_cast<double>(errors.size());
}

Vector mape(std::span<const Vector> errors, std::span<const Vector> actuals) {
  if (errors.size() != actuals.size()) {
    throw Error(ErrorKind::DimensionMismatch, "errors and actuals are not aligned");
  }
  if (errors.empty()) return Vector();
  const Index p = errors.front().size();
  Vector total = Vector::Zero(p);
  for (std::size_t t = 0; t < errors.size(); ++t) {
    if (errors[t].size() != p || actuals[t].size() != p) {
      throw Error(ErrorKind::DimensionMismatch, "vectors differ in length at t=" +
                                                    std::to_string(t + 1));
    }
    for (Index i = 0; i < p; ++i) {
      if (actuals[t](i) == 0.0) {
        throw Error(ErrorKind::DivisionByZero, "actual value of component " +
                                                   std::to_string(i + 1) + " at t=" +
                                                   std::to_string(t + 1) + " is zero");
      }
      total(i) += std::abs(errors[t](i)) / std::abs(actuals[t](i));
    }
  }
  return total / static_cast<double>(errors.size());
}

Matrix correlations(const SymMatrix& S) {
  const Vector diag = S.matrix().diagonal();
  if ((diag.array() <= 0.0).any()) {
    throw Error(ErrorKind::Singular, "correlation undefined for a zero or negative variance");
  }
  const Vector inv_sd = diag.cwiseSqrt().cwiseInverse();
  Matrix rho = inv_sd.asDiagonal() * S.matrix() * inv_sd.asDiagonal();
  rho.diagonal().setOnes();
  return rho;
}

MetricsReport evaluate(const FilterRun& run) {
  std::vector<Vector> errors;
  std::vector<SymMatrix> covs;
  std::vector<Vector> actuals;
  errors.reserve(run.steps.size());
  for (const auto& step : run.steps) {
    errors.push_back(step.e);
    covs.push_back(step.Q);
    actuals.push_back(step.y);
  }
  return {msse(errors, covs), mape(errors, actuals), run.steps.size()};
}

}  // namespace covdlm
