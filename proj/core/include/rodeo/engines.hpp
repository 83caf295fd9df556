#pragma once

#include <rodeo/derivative.hpp>
#include <rodeo/errors.hpp>
#include <rodeo/noise.hpp>
#include <rodeo/smoother.hpp>

#include <cstddef>
#include <optional>
#include <vector>

namespace rodeo {

//! How sigma is obtained for the thresholds. Resolved once, before the
//! bandwidth loop, and held fixed.
struct SigmaMode
{
  enum class Kind
  {
    known,
    rice,
    median,
    paper_literal
  };

  Kind kind = Kind::rice;
  double value = 0.0;                 // used by `known`
  std::optional<std::size_t> pairs;   // J for the estimators; default_pair_count(n) if unset

  static SigmaMode known(double sigma) { return { Kind::known, sigma, std::nullopt }; }
  static SigmaMode rice(std::optional<std::size_t> J = std::nullopt) { return { Kind::rice, 0.0, J }; }
  static SigmaMode median(std::optional<std::size_t> J = std::nullopt) { return { Kind::median, 0.0, J }; }
  static SigmaMode paper_literal(std::optional<std::size_t> J = std::nullopt)
  {
    return { Kind::paper_literal, 0.0, J };
  }
};

struct ThresholdMode
{
  enum class Kind
  {
    hard,
    modified
  };

  Kind kind = Kind::hard;
  //! rho_n of the modified threshold; 0.1 * h0^2 when unset.
  std::optional<double> rho_n;

  static ThresholdMode hard() { return {}; }
  static ThresholdMode modified(std::optional<double> rho = std::nullopt) { return { Kind::modified, rho }; }
};

struct RodeoConfig
{
  double beta = 0.8;
  double h0 = 1.0;
  double c_n = 1.0;
  SigmaMode sigma;
  KernelSpec kernel = KernelSpec::gaussian();
  //! ceil(10 log n) when unset.
  std::optional<std::size_t> max_steps;
  ThresholdMode threshold;
  //! 1e-3 * h0 when unset.
  std::optional<double> min_bandwidth_floor;
  SmootherDegree degree = SmootherDegree::local_linear;

  //! Throws ConfigError on out-of-range values.
  void validate() const;
  //! Copy with every optional default materialized for sample size n.
  RodeoConfig resolved(std::size_t n) const;
};

struct BetaH0
{
  double beta = 0.0;
  double h0 = 0.0;
};

//! beta = n^(-alpha / log^3 n) and h0 = c0 / log log n (natural logs).
//! Requires n >= 3 and 0 < alpha < 1.
BetaH0 default_parameters(std::size_t n, double c0, double alpha);

//! Resolves sigma for a dataset.
double resolve_sigma(const Dataset& data, const SigmaMode& mode);

//! One loop decision: variable j at step t.
struct TraceRecord
{
  std::size_t t = 0;
  std::size_t j = 0;
  double Z = 0.0;
  double s = 0.0;
  double lambda = 0.0;
  double h_before = 0.0;
  double h_after = 0.0;
  bool active_after = false;
};

//! Shrink/freeze state shared by the engines.
struct BandwidthState
{
  Vector h;
  std::vector<bool> active;
  std::size_t t = 0;

  BandwidthState(std::size_t d, double h0);
  bool any_active() const;
};

struct RodeoResult
{
  Vector h_star;
  double estimate = 0.0;
  std::vector<TraceRecord> trace;
  std::size_t steps_taken = 0;
  //! sum over steps of <D_hat(t), dh(t)>; 0 for the hard version.
  double soft_correction = 0.0;
  double sigma_used = 0.0;
};

//! Raised when a fit fails mid-loop; carries the trace recorded so far.
class RodeoFailure : public FitError
{
public:
  RodeoFailure(const std::string& what, std::vector<TraceRecord> partial)
    : FitError(what)
    , partial_trace(std::move(partial))
  {
  }

  std::vector<TraceRecord> partial_trace;
};

//! Hard-thresholding rodeo at a single point: shrink h_j by beta while
//! |Z_j| exceeds its threshold, freeze it otherwise, and return the local
//! fit at the final bandwidths.
RodeoResult rodeo_hard(const Dataset& data, const Vector& x, const RodeoConfig& config);

//! Soft-thresholding rodeo. Walks the same bandwidth path as the hard
//! version and returns mhat_h0(x) - sum_t <D_hat(t), dh(t)> with
//! D_hat_j = sign(Z_j)(|Z_j| - lambda_j)_+ and dh_j = (1 - beta) h_j.
RodeoResult rodeo_soft(const Dataset& data, const Vector& x, const RodeoConfig& config);

//! Statistic of the multi-point rodeo for one variable at one step.
struct GlobalStat
{
  std::size_t j = 0;
  double T = 0.0;
  double lambda = 0.0;
  double trace_P = 0.0;
  double trace_PP = 0.0;
};

struct GlobalTraceRecord
{
  std::size_t t = 0;
  GlobalStat stat;
  double h_before = 0.0;
  double h_after = 0.0;
  bool active_after = false;
};

struct GlobalResult
{
  Vector h_star;
  //! Local fit at each evaluation point with the shared final bandwidths.
  Vector estimates;
  std::vector<GlobalTraceRecord> trace;
  std::size_t steps_taken = 0;
  double sigma_used = 0.0;
};

//! T_j, tr(P_j), tr(P_j P_j) and the threshold from the n x k matrix whose
//! columns are g_j at each evaluation point.
GlobalStat global_stat(const Matrix& derivative_weights, const Vector& Y, double sigma, double c_n, std::size_t j);

//! Global rodeo: one bandwidth vector shared by the k rows of
//! `eval_points`; h_j shrinks while T_j = mean_i Z_j(x_i)^2 exceeds
//! (s^2/k) tr(P_j) + 2 (s^2/k) sqrt(tr(P_j P_j) log(c_n n)).
GlobalResult rodeo_global(const Dataset& data, const Matrix& eval_points, const RodeoConfig& config);

struct GreedyStep
{
  std::size_t t = 0;
  std::size_t winner = 0;
  //! mean over evaluation points of |Z_j| / lambda_j, one entry per variable
  Vector scores;
  double h_before = 0.0;
  double h_after = 0.0;
};

struct GreedyResult
{
  std::vector<GreedyStep> steps;
  //! Variables in the order of their first shrink.
  std::vector<std::size_t> selection_order;
  Vector h_star;
};

//! Nonparametric forward stagewise selection: each step shrinks only the
//! variable with the largest mean |Z_j| / lambda_j over the evaluation
//! points (ties to the lower index). lambda_j is computed with sigma = 1,
//! which cancels in the argmax. Variables whose shrink would cross the
//! bandwidth floor are skipped; the run stops early if none remain.
GreedyResult rodeo_greedy(const Dataset& data,
                          const Matrix& eval_points,
                          const RodeoConfig& config,
                          std::size_t n_steps);

//! n x d matrix whose column j is g_j at (x, h); with `h_prime`, the
//! columnwise difference g_j(x, h') - g_j(x, h).
Matrix pseudo_covariates(const Dataset& data,
                         const Vector& x,
                         const Vector& h,
                         const std::optional<Vector>& h_prime,
                         const KernelSpec& kernel,
                         SmootherDegree degree = SmootherDegree::local_linear);

struct PrefitMethod
{
  enum class Kind
  {
    ols,
    lasso
  };

  Kind kind = Kind::ols;
  double lambda1 = 0.0;

  static PrefitMethod ols() { return {}; }
  static PrefitMethod lasso(double l1) { return { Kind::lasso, l1 }; }
};

struct LinearPrefit
{
  //! intercept followed by d slopes
  Vector coefficients;
  Dataset residuals;
};

//! Fits a linear model and returns the dataset with Y replaced by the
//! residuals. The lasso minimizes (1/2n)||Y - b0 - Xb||^2 + lambda1 ||b||_1
//! by cyclic coordinate descent until the duality gap is below 1e-8.
LinearPrefit linear_prefit(const Dataset& data, const PrefitMethod& method);

} // namespace rodeo
