#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "covdlm/errors.hpp"
#include "covdlm/models.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace covdlm;
using covdlm::testing::random_matrix;
using covdlm::testing::random_spd;
using covdlm::testing::random_vector;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected covdlm::Error");
  return ErrorKind::IoError;
}

std::vector<Vector> simulate_var(const std::vector<Matrix>& phis, const Matrix& chol, int n,
                                 std::mt19937_64& rng) {
  const Index p = chol.rows();
  std::vector<Vector> y(phis.size(), Vector::Zero(p));
  for (int t = 0; t < n; ++t) {
    Vector next = chol * random_vector(p, rng);
    for (std::size_t k = 0; k < phis.size(); ++k) next += phis[k] * y[y.size() - 1 - k];
    y.push_back(next);
  }
  return y;
}

}  // namespace

TEST_CASE("VAR design is X (x) I") {
  Vector x(2);
  x << 1, 2;
  Matrix expected(4, 2);
  expected << 1, 0, 0, 1, 2, 0, 0, 2;
  CHECK(var_design(x, 2, 1) == expected);

  std::mt19937_64 rng(1);
  const Matrix phi = random_matrix(3, 6, rng);
  const Vector lagged = random_vector(6, rng);
  CHECK((var_design(lagged, 3, 2).transpose() * vec(phi) - phi * lagged).norm() < 1e-12);
  CHECK(kind_of([&] { var_design(lagged, 3, 1); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("stack_lags puts the newest observation first") {
  std::vector<Vector> recent{Vector::Constant(2, 1.0), Vector::Constant(2, 2.0)};
  const Vector x = stack_lags(recent, 2);
  CHECK(x(0) == 1.0);
  CHECK(x(3) == 2.0);
  CHECK(kind_of([&] { stack_lags(std::span(recent).first(1), 2); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("linear trend and seasonal structure") {
  const auto lt = linear_trend(1);
  Matrix G(2, 2);
  G << 1, 1, 0, 1;
  CHECK(lt.transition == G);
  CHECK(lt.fixed_design() == (Matrix(2, 1) << 1, 0).finished());
  CHECK(lt.d == 2);

  const auto se = seasonal(2, 4);
  Matrix g4 = se.transition;
  for (int i = 0; i < 3; ++i) g4 = g4 * se.transition;
  CHECK((g4 - Matrix::Identity(4, 4)).norm() < 1e-12);
  CHECK(kind_of([] { seasonal(1, 1); }) == ErrorKind::InvalidDimension);
  CHECK(kind_of([] { local_level(0); }) == ErrorKind::InvalidDimension);
}

TEST_CASE("VAR with known Sigma equals the batch regression posterior") {
  std::mt19937_64 rng(42);
  for (int order : {1, 2}) {
    std::vector<Matrix> phis;
    for (int k = 0; k < order; ++k) phis.push_back(0.3 / order * Matrix::Identity(2, 2));
    const SymMatrix sigma = random_spd(2, rng, 0.5);
    const Matrix chol = sigma.matrix().llt().matrixL();
    const auto data = simulate_var(phis, chol, 200, rng);

    const auto spec = var_model(2, order);
    const Prior prior = default_prior(spec, sigma, 1000.0);
    const FilterRun run = run_filter(spec, prior, data, CovarianceMode::Fixed);
    const Vector oracle = oracle::batch_regression(data, order, sigma.matrix(), prior.m0,
                                                   prior.P0.matrix());
    CHECK((run.final_state.m - oracle).norm() < 1e-8 * std::max(1.0, oracle.norm()));
  }
}

TEST_CASE("TVVAR with delta one is bit-identical to VAR") {
  std::mt19937_64 rng(3);
  std::vector<Vector> data;
  for (int t = 0; t < 60; ++t) data.push_back(random_vector(3, rng));
  const auto var = var_model(3, 2);
  const auto tv = tvvar_model(3, 2, 1.0);
  const Prior prior = default_prior(var, SymMatrix::identity(3));
  const auto a = run_filter(var, prior, data);
  const auto b = run_filter(tv, prior, data);
  CHECK(a.final_state.m == b.final_state.m);
  CHECK(a.final_state.P.matrix() == b.final_state.P.matrix());
  CHECK(a.final_state.S.matrix() == b.final_state.S.matrix());
}

TEST_CASE("VAR builder rejects bad hyperparameters") {
  CHECK(kind_of([] { tvvar_model(2, 1, 1.5); }) == ErrorKind::InvalidDiscount);
  CHECK(kind_of([] { tvvar_model(2, 1, 0.0); }) == ErrorKind::InvalidDiscount);
  CHECK(kind_of([] { var_model(2, 0); }) == ErrorKind::InvalidDimension);
  CHECK(VarSpec{2, 3, true, 0.5}.build().d == 12);
}

TEST_CASE("coefficient round trip and companion matrix") {
  std::mt19937_64 rng(9);
  std::vector<Matrix> phis{random_matrix(2, 2, rng), random_matrix(2, 2, rng)};
  const Vector theta = state_from_coefficients(phis);
  const auto back = coefficients_from_state(theta, 2, 2);
  CHECK(back[0] == phis[0]);
  CHECK(back[1] == phis[1]);
  const Matrix c = companion(phis);
  CHECK(c.topLeftCorner(2, 2) == phis[0]);
  CHECK(c.topRightCorner(2, 2) == phis[1]);
  CHECK(c.bottomLeftCorner(2, 2) == Matrix::Identity(2, 2));
}

TEST_CASE("stationarity examples") {
  std::vector<Matrix> stable{0.5 * Matrix::Identity(2, 2)};
  CHECK(stationarity_check(stable).stationary);
  CHECK(stationarity_check(stable).max_root_modulus == doctest::Approx(0.5));
  std::vector<Matrix> unit{Matrix::Identity(2, 2)};
  CHECK(!stationarity_check(unit).stationary);
  std::vector<Matrix> ar2{Matrix::Constant(1, 1, 0.5), Matrix::Constant(1, 1, 0.3)};
  CHECK(stationarity_check(ar2).stationary);
  std::vector<Matrix> explosive{Matrix::Constant(1, 1, 0.5), Matrix::Constant(1, 1, 0.6)};
  CHECK(!stationarity_check(explosive).stationary);
}

TEST_CASE("companion verdicts agree with the polynomial roots") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> scale(0.2, 2.0);
  int disagreements = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 1 + trial % 3;
    const int order = 1 + (trial / 3) % 3;
    std::vector<Matrix> phis;
    const double s = scale(rng) / std::sqrt(static_cast<double>(p * order));
    for (int k = 0; k < order; ++k) phis.push_back(s * random_matrix(p, p, rng));
    double min_root = 0.0;
    const bool by_roots = oracle::stationary_by_roots(phis, &min_root);
    const auto result = stationarity_check(phis);
    if (by_roots != result.stationary) ++disagreements;
    CHECK(result.max_root_modulus == doctest::Approx(1.0 / min_root).epsilon(1e-6));
  }
  CHECK(disagreements == 0);
}

TEST_CASE("DWR keeps the leading coordinate at one") {
  std::mt19937_64 rng(5);
  const auto spec = dwr_model(2, 0.9);
  const Prior prior = default_prior(spec, SymMatrix::identity(2));
  CHECK(prior.m0(0) == 1.0);
  CHECK(prior.P0(0, 0) == 0.0);
  SequentialFilter filter(spec, prior);
  Vector y = Vector::Constant(2, 10.0);
  filter.push(y);
  CHECK((filter.forecast(1).mean - y).norm() < 1e-12);
  for (int t = 0; t < 100; ++t) {
    y += Vector::Constant(2, 0.5) + random_vector(2, rng);
    filter.push(y);
    CHECK(std::abs(filter.state().m(0) - 1.0) < 1e-10);
  }
}

TEST_CASE("matrix-variate recursion") {
  SymMatrix S(Matrix::Constant(1, 1, 2.0));
  const SymMatrix next = mvdlm_s_recursion(S, 1.0, Vector::Constant(1, 3.0), 1.5);
  CHECK(next(0, 0) == doctest::Approx(4.0));
  CHECK(kind_of([&] { mvdlm_s_recursion(S, 1.0, Vector::Constant(1, 3.0), 0.0); }) ==
        ErrorKind::InvalidScale);
}

TEST_CASE("general update equals the matrix-variate form when Q = U S") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int k = 0; k < 200; ++k) {
    const int p = 1 + k % 4;
    const double c = u(rng);
    const SymMatrix S = random_spd(p, rng, 0.2);
    ModelSpec spec = local_level(p);
    spec.evolution = FixedEvolution{SymMatrix::zero(p)};
    FilterState state = init(spec, {Vector::Zero(p), SymMatrix(c * S.matrix()), S, 1.0 + k});
    const Vector y = 2.0 * random_vector(p, rng);
    const FilterState next = filter_step(state, y, spec.fixed_design(), spec.transition,
                                         spec.evolution);
    const SymMatrix expected = mvdlm_s_recursion(S, state.n, y, c + 1.0);
    CHECK(relative_frobenius_error(next.S.matrix(), expected.matrix()) < 1e-10);
  }
}

TEST_CASE("matrix-variate trend filter") {
  const auto spec = mvdlm_trend(0.9);
  MvDlmFilter filter(spec, Matrix::Zero(2, 2), SymMatrix(100.0 * Matrix::Identity(2, 2)),
                     SymMatrix::identity(2), 1.0);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const Vector y = Vector::Constant(2, 2.0 * t) + random_vector(2, rng);
    const auto step = filter.push(y);
    CHECK(step.Q.matrix().allFinite());
  }
  CHECK(filter.n() == 51.0);
  CHECK(filter.mean()(1, 0) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(kind_of([] { mvdlm_trend(1.2); }) == ErrorKind::InvalidDiscount);
}
