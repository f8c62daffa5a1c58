#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "covdlm/errors.hpp"
#include "covdlm/models.hpp"
#include "covdlm/simulate.hpp"

using namespace covdlm;

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

SymMatrix sigma_1() {
  Matrix s(2, 2);
  s << 2, 3, 3, 5;
  return SymMatrix(s);
}

SimConfig small_config(Family family, int reps, int length) {
  SimConfig c;
  c.family = family;
  c.sigma = sigma_1();
  c.length = length;
  c.replications = reps;
  c.prior = default_prior(study_model(c), SymMatrix::identity(2));
  c.snapshots = {10, length};
  c.seed = 5;
  c.workers = 1;
  return c;
}

}  // namespace

TEST_CASE("noiseless local level series is constant") {
  auto spec = local_level(2);
  spec.evolution = FixedEvolution{SymMatrix::zero(2)};
  Rng rng = make_rng(1);
  const Vector theta0 = Vector::Constant(2, 3.5);
  const auto series = generate_from(spec, theta0, SymMatrix::zero(2), 25, rng);
  REQUIRE(series.observations.size() == 25);
  REQUIRE(series.states.size() == 26);
  for (const auto& y : series.observations) CHECK(y == theta0);
}

TEST_CASE("observation noise has the requested covariance") {
  const auto spec = local_level(2);
  Rng rng = make_rng(2);
  const int N = 20000;
  const auto series = generate_from(spec, Vector::Zero(2), sigma_1(), N, rng);
  Matrix cov = Matrix::Zero(2, 2);
  for (int t = 0; t < N; ++t) {
    const Vector r = series.observations[t] - series.states[t + 1];
    cov += r * r.transpose();
  }
  cov /= N;
  CHECK(cov(0, 0) == doctest::Approx(2.0).epsilon(0.03));
  CHECK(cov(0, 1) == doctest::Approx(3.0).epsilon(0.03));
  CHECK(cov(1, 1) == doctest::Approx(5.0).epsilon(0.03));
}

TEST_CASE("generation is reproducible by seed") {
  const auto spec = linear_trend(2);
  const Prior prior = default_prior(spec, SymMatrix::identity(2), 10.0);
  const auto a = generate(spec, prior, sigma_1(), 50, 9);
  const auto b = generate(spec, prior, sigma_1(), 50, 9);
  const auto c = generate(spec, prior, sigma_1(), 50, 10);
  for (std::size_t t = 0; t < 50; ++t) CHECK(a.observations[t] == b.observations[t]);
  CHECK(a.observations[0] != c.observations[0]);
  CHECK(trending_panel(3, 20, 4) == trending_panel(3, 20, 4));
  CHECK(trending_panel(3, 20, 4).size() == 20);
}

TEST_CASE("generation needs a fixed evolution") {
  Rng rng = make_rng(1);
  CHECK(kind_of([&] {
          generate_from(tvvar_model(2, 1, 0.9), Vector::Zero(4), sigma_1(), 10, rng);
        }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { generate_from(local_level(2), Vector::Zero(2), sigma_1(), 0, rng); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("VAR generation follows the coefficients") {
  SimConfig c;
  c.family = Family::Var;
  c.sigma = SymMatrix::zero(2);
  const ModelSpec spec = generating_model(c);
  CHECK(std::get<FixedEvolution>(spec.evolution).omega.matrix().isZero(0.0));
  Rng rng = make_rng(3);
  const Vector theta = vec(0.5 * Matrix::Identity(2, 2));
  const auto series = generate_from(spec, theta, sigma_1(), 30, rng);
  for (int t = 1; t < 30; ++t) {
    const Vector noise = series.observations[t] - 0.5 * series.observations[t - 1];
    CHECK(noise.allFinite());
  }
}

TEST_CASE("a single replication is a single filter trace") {
  const SimConfig c = small_config(Family::LocalLevel, 1, 40);
  const StudyReport report = replication_study(c);
  const ReplicationResult one = run_replication(c, 0);
  REQUIRE(report.s_bar.size() == 40);
  for (std::size_t t = 0; t < 40; ++t) CHECK(report.s_bar[t].matrix() == one.s_trace[t].matrix());
  CHECK(report.snapshots.size() == 2);
  CHECK(report.snapshots[1].t == 40);
  CHECK(report.msse_estimated == one.sq_std_estimated / 40.0);
}

TEST_CASE("accumulator merge is associative") {
  const SimConfig c = small_config(Family::LinearTrend, 3, 30);
  std::vector<StudyAccumulator> parts(3);
  for (int i = 0; i < 3; ++i) parts[i].add(run_replication(c, static_cast<std::uint64_t>(i)));

  StudyAccumulator left = parts[0];
  left.merge(parts[1]);
  left.merge(parts[2]);
  StudyAccumulator right_tail = parts[1];
  right_tail.merge(parts[2]);
  StudyAccumulator right = parts[0];
  right.merge(right_tail);
  StudyAccumulator reversed = parts[2];
  reversed.merge(parts[1]);
  reversed.merge(parts[0]);

  const auto a = left.report(c), b = right.report(c), r = reversed.report(c);
  CHECK(a.replications == 3);
  for (std::size_t t = 0; t < a.s_bar.size(); ++t) {
    CHECK(relative_frobenius_error(a.s_bar[t].matrix(), b.s_bar[t].matrix()) < 1e-12);
    CHECK(relative_frobenius_error(a.s_bar[t].matrix(), r.s_bar[t].matrix()) < 1e-12);
  }
  CHECK((a.msse_known - r.msse_known).norm() < 1e-12);
  CHECK(kind_of([&] { StudyAccumulator{}.report(c); }) == ErrorKind::InsufficientData);
}

TEST_CASE("the report does not depend on the worker count") {
  SimConfig c = small_config(Family::Seasonal, 20, 30);
  c.period = 4;
  const auto serial = replication_study(c);
  c.workers = 3;
  const auto threaded = replication_study(c);
  for (std::size_t t = 0; t < serial.s_bar.size(); ++t) {
    CHECK(serial.s_bar[t].matrix() == threaded.s_bar[t].matrix());
  }
  CHECK(serial.msse_estimated == threaded.msse_estimated);
}

TEST_CASE("known-Sigma MSSE is near one on a modest study") {
  const SimConfig c = small_config(Family::LocalLevel, 40, 200);
  const auto report = replication_study(c);
  for (Index i = 0; i < 2; ++i) {
    CHECK(report.msse_known(i) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(report.msse_estimated(i) > 0.6);
    CHECK(report.msse_estimated(i) < 1.3);
  }
}

TEST_CASE("study configuration checks") {
  SimConfig c = small_config(Family::LocalLevel, 1, 10);
  c.replications = 0;
  CHECK(kind_of([&] { replication_study(c); }) == ErrorKind::ValidationError);
  c = small_config(Family::LocalLevel, 1, 10);
  c.sigma = SymMatrix::zero(2);
  CHECK(kind_of([&] { replication_study(c); }) == ErrorKind::ValidationError);
  c = small_config(Family::LocalLevel, 1, 10);
  c.family = Family::Dwr;
  CHECK(kind_of([&] { replication_study(c); }) == ErrorKind::ValidationError);
  c.family = Family::Var;
  CHECK(kind_of([&] { replication_study(c); }) == ErrorKind::ValidationError);
}
