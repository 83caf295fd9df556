#pragma once

#include <rodeo/engines.hpp>

#include <cstdint>
#include <functional>
#include <random>
#include <string_view>
#include <vector>

namespace rodeo {

//! Synthetic regression problems.
//!
//!  quad2   m(x) = 5 x1^2 x2^2
//!  cubesin m(x) = 2 (x1 + 1)^3 + 2 sin(10 x2)
//!  onedim  m(x) = sin(15 / x) / x, with x ~ U(0,1) + 1/2 and d = 1
//!  turlach m(x) = (x1 - 1/2)^2 + x2 + x3 + x4 + x5
//!
//! All other covariates are U(0,1) and irrelevant.
enum class ExampleName
{
  quad2,
  cubesin,
  onedim,
  turlach
};

ExampleName example_from_name(std::string_view name);
std::string_view example_name(ExampleName name);

//! 0-based indices of the variables the truth depends on.
std::vector<std::size_t> relevant_variables(ExampleName name);
double example_truth(ExampleName name, const Vector& x);

struct ExampleSpec
{
  ExampleName name = ExampleName::quad2;
  std::size_t n = 500;
  std::size_t d = 10;
  double sigma = 0.5;
  std::uint64_t seed = 0;

  //! Throws ConfigError on invalid combinations (onedim needs d = 1,
  //! quad2/cubesin need d >= 2, turlach needs d >= 5).
  void validate() const;
};

//! Sizes and noise levels used for each example in the reference runs.
ExampleSpec default_example(ExampleName name);

struct GeneratedData
{
  Dataset data;
  std::function<double(const Vector&)> truth;
  std::vector<std::size_t> relevant;
};

//! Deterministic in spec.seed. With sigma = 0, Y_i = m(X_i) exactly.
GeneratedData generate(const ExampleSpec& spec);

//! Counter-based seed derivation (splitmix64 finalizer over the base seed,
//! a stream tag and an index); distinct (stream, index) pairs give
//! independent generators.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index);

//! Seed streams used by the harness.
namespace streams {
inline constexpr std::uint64_t data = 1;
inline constexpr std::uint64_t test_points = 2;
inline constexpr std::uint64_t eval_points = 3;
inline constexpr std::uint64_t noise = 4;
} // namespace streams

//! Runs fn(0), ..., fn(count - 1) on a worker pool. Worker count is
//! RODEO_THREADS when set, otherwise the hardware concurrency. Each call
//! must write only its own output slot.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);
std::size_t worker_count();

// --- baselines --------------------------------------------------------------

struct LoocvResult
{
  double h_cv = 0.0;
  //! Leave-one-out sum of squared errors per grid value; NaN when infeasible.
  std::vector<double> scores;
};

//! 30 log-spaced bandwidths in [0.05, 2].
std::vector<double> default_loocv_grid();

//! Single scalar bandwidth h * (1, ..., 1) minimizing the leave-one-out
//! error of the local linear fit, via (Y_i - mhat(X_i)) / (1 - S_ii).
//! Ties go to the smaller h; grid values where a fit fails are skipped.
LoocvResult loocv_single_bandwidth(const Dataset& data, const std::vector<double>& grid, const KernelSpec& kernel);

// --- risk -------------------------------------------------------------------

using PointEngine = std::function<double(const Dataset&, const Vector&)>;

//! Either fixed evaluation points (rows) or `random_count` points drawn per
//! replicate uniformly on [lo, hi]^d.
struct TestPoints
{
  Matrix fixed;
  std::size_t random_count = 0;
  double lo = 0.1;
  double hi = 0.9;

  static TestPoints center(std::size_t d);
  static TestPoints random(std::size_t count);
};

struct RiskSummary
{
  std::size_t replicates = 0;
  std::size_t failures = 0;
  //! Squared errors, replicate-major then point order; failed replicates omitted.
  std::vector<double> errors;
  double mean = 0.0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

RiskSummary summarize_errors(std::vector<double> errors, std::size_t replicates, std::size_t failures);

//! Squared error of `engine` against the truth over fresh datasets. The data
//! of replicate r is generated from derive_seed(spec.seed, streams::data, r).
RiskSummary pointwise_risk(const PointEngine& engine,
                           const ExampleSpec& spec,
                           const TestPoints& points,
                           std::size_t replicates);

// --- theory validation --------------------------------------------------------

//! A regression function with known second derivatives on a uniform design
//! over [lo, hi]^d, so the bias and variance constants are known exactly.
struct TheoryModel
{
  std::function<double(const Vector&)> m;
  //! d^2 m / dx_j^2
  std::function<double(const Vector&, std::size_t)> m_jj;
  std::size_t d = 2;
  double lo = 0.0;
  double hi = 1.0;

  double density() const;
  Matrix sample_design(std::size_t n, std::mt19937_64& rng) const;

  //! m(x) = x1^2
  static TheoryModel first_squared(std::size_t d, double lo, double hi);
  //! m(x) = 1 + sum_j (j + 1) x_j / d
  static TheoryModel linear(std::size_t d, double lo, double hi);
};

//! Moments of the normalized univariate kernel, by adaptive quadrature.
struct KernelMoments
{
  double mass = 0.0;        // integral of the unnormalized kernel
  double nu2 = 0.0;         // second moment of the normalized kernel
  double square_integral = 0.0; // integral of the normalized kernel squared
};

KernelMoments kernel_moments(const KernelSpec& kernel);

struct BiasCheck
{
  double empirical = 0.0;      // mean of Z_j over noise-free replicates
  double standard_error = 0.0; // Monte Carlo standard error of that mean
  double predicted = 0.0;      // nu2 m_jj(x) h_j
};

//! Average of Z_j over fresh noise-free designs against the leading bias
//! term nu2 m_jj(x) h_j (zero for variables m does not curve in, since a
//! uniform design has no density gradient).
BiasCheck bias_check(const TheoryModel& model,
                     std::size_t n,
                     const Vector& x,
                     const Vector& h,
                     std::size_t j,
                     std::size_t replicates,
                     const KernelSpec& kernel,
                     std::uint64_t seed);

struct VarianceCheck
{
  double empirical_sd = 0.0; // sample sd of Z_j over noise draws, X fixed
  double exact_s = 0.0;      // sigma ||g_j||
  double asymptotic_s = 0.0; // sqrt(C / (n h_j^2 prod_k h_k)), C = sigma^2 int K^2 / f(x)
};

VarianceCheck variance_check(const TheoryModel& model,
                             std::size_t n,
                             double sigma,
                             const Vector& x,
                             const Vector& h,
                             std::size_t j,
                             std::size_t replicates,
                             const KernelSpec& kernel,
                             std::uint64_t seed);

struct ScalingCheck
{
  std::vector<std::size_t> ns;
  std::vector<double> mean_log_h;
  double slope = 0.0;
  std::size_t failures = 0;
};

//! Least-squares slope of the replicate-averaged log final bandwidth of
//! variable j against log n, running the hard rodeo at x. Needs at least
//! three increasing sample sizes.
ScalingCheck scaling_check(const std::vector<std::size_t>& ns,
                           const TheoryModel& model,
                           double sigma,
                           const Vector& x,
                           std::size_t j,
                           std::size_t replicates,
                           const RodeoConfig& config,
                           std::uint64_t seed);

} // namespace rodeo
