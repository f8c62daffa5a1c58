#pragma once

#include <cstddef>
#include <span>

#include "covdlm/dlm.hpp"
#include "covdlm/matops.hpp"

namespace covdlm {

struct MetricsReport {
  Vector msse;
  Vector mape;
  std::size_t count = 0;
};

/// Componentwise mean over t of (Q_t^{-1/2} e_t)^2.
Vector msse(std::span<const Vector> errors, std::span<const SymMatrix> covs);

/// Componentwise mean of |e_it| / |y_it|. A zero actual raises DivisionByZero
/// naming the component and the (1-based) time index.
Vector mape(std::span<const Vector> errors, std::span<const Vector> actuals);

/// rho_ij = s_ij / sqrt(s_ii s_jj).
Matrix correlations(const SymMatrix& S);

/// MSSE and MAPE over every filtered step of a run.
MetricsReport evaluate(const FilterRun& run);

}  // namespace covdlm
