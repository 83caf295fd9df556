#include <doctest.h>

#include "support.hpp"

#include <rodeo/experiments.hpp>

#include <cstdlib>
#include <numbers>

using namespace rodeo;
using namespace rodeo::testing;

TEST_CASE("example truths")
{
  Vector x = Vector::Constant(10, 0.5);
  CHECK(example_truth(ExampleName::quad2, x) == doctest::Approx(5.0 / 16.0));
  x[0] = 1.0;
  x[1] = 0.0;
  CHECK(example_truth(ExampleName::cubesin, x) == doctest::Approx(16.0));
  x[0] = 0.5;
  x[1] = 0.5;
  CHECK(example_truth(ExampleName::turlach, x) == doctest::Approx(2.0));
  Vector one(1);
  one << 1.0;
  CHECK(example_truth(ExampleName::onedim, one) == doctest::Approx(std::sin(15.0)));

  CHECK(relevant_variables(ExampleName::turlach).size() == 5);
  CHECK(example_from_name("cubesin") == ExampleName::cubesin);
  CHECK(example_name(ExampleName::onedim) == "onedim");
  CHECK_THROWS_AS(example_from_name("quad3"), ConfigError);
}

TEST_CASE("example specs are validated")
{
  CHECK_THROWS_AS((ExampleSpec{ ExampleName::onedim, 100, 2, 0.5, 0 }.validate()), ConfigError);
  CHECK_THROWS_AS((ExampleSpec{ ExampleName::quad2, 100, 1, 0.5, 0 }.validate()), ConfigError);
  CHECK_THROWS_AS((ExampleSpec{ ExampleName::turlach, 100, 4, 0.5, 0 }.validate()), ConfigError);
  CHECK_THROWS_AS((ExampleSpec{ ExampleName::quad2, 100, 2, -1.0, 0 }.validate()), ConfigError);
  for (auto name : { ExampleName::quad2, ExampleName::cubesin, ExampleName::onedim, ExampleName::turlach })
    CHECK_NOTHROW(default_example(name).validate());
}

TEST_CASE("noise-free generation is exact and deterministic")
{
  for (auto name : { ExampleName::quad2, ExampleName::cubesin, ExampleName::onedim, ExampleName::turlach }) {
    ExampleSpec spec = default_example(name);
    spec.n = 200;
    spec.sigma = 0.0;
    spec.seed = 42;
    const GeneratedData gen = generate(spec);
    for (Eigen::Index i = 0; i < gen.data.X().rows(); ++i)
      CHECK(gen.data.Y()[i] == gen.truth(gen.data.X().row(i).transpose()));
    const double lo = name == ExampleName::onedim ? 0.5 : 0.0;
    CHECK(gen.data.X().minCoeff() >= lo);
    CHECK(gen.data.X().maxCoeff() <= lo + 1.0);

    spec.sigma = 0.3;
    const GeneratedData a = generate(spec);
    const GeneratedData b = generate(spec);
    CHECK(a.data.X() == b.data.X());
    CHECK(a.data.Y() == b.data.Y());
    spec.seed = 43;
    CHECK(generate(spec).data.Y() != a.data.Y());
  }
}

TEST_CASE("seed derivation separates streams")
{
  CHECK(derive_seed(1, 1, 0) == derive_seed(1, 1, 0));
  CHECK(derive_seed(1, 1, 0) != derive_seed(1, 2, 0));
  CHECK(derive_seed(1, 1, 0) != derive_seed(1, 1, 1));
  CHECK(derive_seed(1, 1, 0) != derive_seed(2, 1, 0));
}

TEST_CASE("parallel_for visits each index once")
{
  std::vector<int> hits(257, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits)
    CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7)
                      throw ConfigError("boom");
                  }),
                  ConfigError);
}

TEST_CASE("LOOCV leverage shortcut matches explicit refits")
{
  const Dataset data = random_dataset(30, 2, 19);
  const std::vector<double> grid{ 0.3, 0.6, 1.2 };
  const LoocvResult res = loocv_single_bandwidth(data, grid, KernelSpec::gaussian());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double score = 0.0;
    for (Eigen::Index i = 0; i < 30; ++i) {
      Matrix X(29, 2);
      Vector Y(29);
      for (Eigen::Index r = 0, k = 0; r < 30; ++r) {
        if (r == i)
          continue;
        X.row(k) = data.X().row(r);
        Y[k++] = data.Y()[r];
      }
      const double pred = oracle_local_linear(Dataset(X, Y), data.X().row(i).transpose(),
                                              Vector::Constant(2, grid[g]), KernelFamily::gaussian);
      score += std::pow(data.Y()[i] - pred, 2);
    }
    CHECK(res.scores[g] == doctest::Approx(score).epsilon(1e-8));
  }
  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g)
    if (res.scores[g] < res.scores[best])
      best = g;
  CHECK(res.h_cv == grid[best]);
}

TEST_CASE("LOOCV edge cases")
{
  const Dataset data = random_dataset(40, 1, 20);
  CHECK(loocv_single_bandwidth(data, { 0.7 }, KernelSpec::gaussian()).h_cv == 0.7);
  CHECK_THROWS_AS(loocv_single_bandwidth(data, {}, KernelSpec::gaussian()), ConfigError);

  // exactly linear data: every bandwidth has zero error, ties go to the smallest
  const Dataset linear = data.with_response(2.0 * data.X().col(0).array() + 1.0);
  const auto grid = default_loocv_grid();
  CHECK(grid.size() == 30);
  CHECK(grid.front() == doctest::Approx(0.05));
  CHECK(grid.back() == doctest::Approx(2.0));
  const LoocvResult res = loocv_single_bandwidth(linear, { 0.9, 0.3, 1.5 }, KernelSpec::gaussian());
  CHECK(res.h_cv == 0.3);

  // compact kernel with tiny bandwidth leaves every point alone
  const LoocvResult sparse = loocv_single_bandwidth(data, { 1e-6, 0.5 }, KernelSpec::epanechnikov());
  CHECK(std::isnan(sparse.scores[0]));
  CHECK(sparse.h_cv == 0.5);
}

TEST_CASE("summaries and risk")
{
  const RiskSummary s = summarize_errors({ 4.0, 1.0, 3.0, 2.0 }, 5, 1);
  CHECK(s.mean == 2.5);
  CHECK(s.median == 2.5);
  CHECK(s.min == 1.0);
  CHECK(s.max == 4.0);
  CHECK(s.q25 == doctest::Approx(1.75));
  CHECK(s.failures == 1);

  ExampleSpec spec = default_example(ExampleName::quad2);
  spec.n = 150;
  spec.d = 3;
  spec.seed = 7;
  const PointEngine engine = [](const Dataset& data, const Vector& x) {
    return local_linear_fit(data, x, Vector::Constant(data.X().cols(), 0.5), KernelSpec::gaussian()).mhat;
  };
  const RiskSummary a = pointwise_risk(engine, spec, TestPoints::random(3), 4);
  const RiskSummary b = pointwise_risk(engine, spec, TestPoints::random(3), 4);
  CHECK(a.errors == b.errors);
  CHECK(a.errors.size() == 12);
  CHECK(pointwise_risk(engine, spec, TestPoints::center(3), 4).errors.size() == 4);

  const PointEngine failing = [](const Dataset&, const Vector&) -> double { throw FitError("no"); };
  const RiskSummary f = pointwise_risk(failing, spec, TestPoints::center(3), 3);
  CHECK(f.failures == 3);
  CHECK(f.errors.empty());
}

TEST_CASE("kernel moments")
{
  const KernelMoments g = kernel_moments(KernelSpec::gaussian());
  CHECK(g.mass == doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-10));
  CHECK(g.nu2 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(g.square_integral == doctest::Approx(0.5 / std::sqrt(std::numbers::pi)).epsilon(1e-10));

  const KernelMoments e = kernel_moments(KernelSpec::epanechnikov());
  CHECK(e.mass == doctest::Approx(20.0 * std::sqrt(5.0) / 3.0).epsilon(1e-10));
  CHECK(e.nu2 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(e.square_integral == doctest::Approx(3.0 * std::sqrt(5.0) / 25.0).epsilon(1e-10));

  for (const auto& k : { KernelSpec::gaussian(), KernelSpec::epanechnikov() })
    CHECK(kernel_moments(k).nu2 == doctest::Approx(k.nu2).epsilon(1e-10));
}

TEST_CASE("theory checks")
{
  const TheoryModel lin = TheoryModel::linear(2, -2.0, 2.0);
  CHECK(lin.density() == doctest::Approx(1.0 / 16.0));
  const Vector x = Vector::Zero(2);
  const Vector h = Vector::Constant(2, 0.5);

  // noise-free linear truth: Z is exactly zero, as predicted
  const BiasCheck b = bias_check(lin, 500, x, h, 0, 4, KernelSpec::gaussian(), 1);
  CHECK(std::abs(b.empirical) < 1e-8);
  CHECK(b.predicted == 0.0);

  const BiasCheck sq = bias_check(TheoryModel::first_squared(2, -2.0, 2.0), 2000, x, h, 0, 4,
                                  KernelSpec::gaussian(), 2);
  CHECK(sq.predicted == doctest::Approx(1.0));

  const VarianceCheck v = variance_check(lin, 1000, 0.5, x, h, 0, 500, KernelSpec::gaussian(), 3);
  CHECK(std::abs(v.empirical_sd / v.exact_s - 1.0) < 0.15);
  CHECK(v.asymptotic_s > 0.0);

  CHECK_THROWS_AS(bias_check(lin, 100, x, h, 0, 1, KernelSpec::gaussian(), 1), ConfigError);
  RodeoConfig cfg;
  CHECK_THROWS_AS(scaling_check({ 100, 200 }, lin, 0.5, x, 0, 2, cfg, 1), ConfigError);
  CHECK_THROWS_AS(scaling_check({ 100, 300, 200 }, lin, 0.5, x, 0, 2, cfg, 1), ConfigError);

  const ScalingCheck s = scaling_check({ 100, 200, 400 }, lin, 0.5, x, 0, 2, cfg, 4);
  CHECK(s.mean_log_h.size() == 3);
  // a linear truth never triggers a shrink in expectation, so bandwidths stay near h0
  CHECK(s.mean_log_h[0] > std::log(0.5));
}

TEST_CASE("variance check invariants")
{
  const TheoryModel model = TheoryModel::first_squared(2, -2.0, 2.0);
  const Vector x = Vector::Zero(2);
  const Vector h = Vector::Constant(2, 0.5);

  const VarianceCheck zero = variance_check(model, 400, 0.0, x, h, 0, 10, KernelSpec::gaussian(), 5);
  CHECK(zero.empirical_sd < 1e-12);
  CHECK(zero.exact_s == 0.0);
  CHECK(zero.asymptotic_s == 0.0);

  // exact s is sigma times the norm of the unit-response probe
  const double sigma = 0.8;
  const VarianceCheck v = variance_check(model, 60, sigma, x, h, 1, 5, KernelSpec::epanechnikov(), 6);
  std::mt19937_64 rng(derive_seed(6, streams::data, 0));
  Matrix X = model.sample_design(60, rng);
  const Dataset design(X, Vector::Zero(60));
  const Vector g = probe_unit_responses(
    design, [&](const Dataset& unit) { return z_statistic(unit, x, h, KernelSpec::epanechnikov(), 1); });
  CHECK(std::abs(v.exact_s - sigma * g.norm()) < 1e-10);
}

TEST_CASE("bias of a linear truth is statistically zero")
{
  const TheoryModel lin = TheoryModel::linear(3, -2.0, 2.0);
  for (std::size_t j = 0; j < 3; ++j) {
    const BiasCheck b = bias_check(lin, 300, Vector::Zero(3), Vector::Constant(3, 0.6), j, 10,
                                   KernelSpec::gaussian(), 10 + j);
    CHECK(std::abs(b.empirical) <= 3.0 * b.standard_error + 1e-10);
  }
}

TEST_CASE("risk grows with the noise level")
{
  ExampleSpec spec = default_example(ExampleName::quad2);
  spec.n = 200;
  spec.d = 3;
  spec.seed = 9;
  RodeoConfig cfg;
  const PointEngine engine = [&](const Dataset& data, const Vector& x) { return rodeo_hard(data, x, cfg).estimate; };
  spec.sigma = 0.0;
  const RiskSummary clean = pointwise_risk(engine, spec, TestPoints::center(3), 30);
  spec.sigma = 0.5;
  const RiskSummary noisy = pointwise_risk(engine, spec, TestPoints::center(3), 30);
  CHECK(clean.mean <= noisy.mean);
}
