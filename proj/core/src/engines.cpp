#include <rodeo/engines.hpp>

#include <cmath>
#include <string>

namespace rodeo {

void RodeoConfig::validate() const
{
  if (!(beta > 0.0 && beta < 1.0))
    throw ConfigError("beta must lie in (0, 1)");
  if (!(h0 > 0.0) || !std::isfinite(h0))
    throw ConfigError("h0 must be positive and finite");
  if (!(c_n > 0.0) || !std::isfinite(c_n))
    throw ConfigError("c_n must be positive and finite");
  if (max_steps && *max_steps < 1)
    throw ConfigError("max_steps must be at least 1");
  if (min_bandwidth_floor && !(*min_bandwidth_floor > 0.0))
    throw ConfigError("min_bandwidth_floor must be positive");
  if (sigma.kind == SigmaMode::Kind::known && !(sigma.value >= 0.0 && std::isfinite(sigma.value)))
    throw ConfigError("known sigma must be finite and nonnegative");
  if (sigma.pairs && *sigma.pairs < 1)
    throw ConfigError("sigma pair count must be at least 1");
  if (threshold.rho_n && !(*threshold.rho_n >= 0.0))
    throw ConfigError("rho_n must be nonnegative");
  if (!(kernel.scale > 0.0))
    throw ConfigError("kernel scale must be positive");
}

RodeoConfig RodeoConfig::resolved(std::size_t n) const
{
  validate();
  RodeoConfig out = *this;
  if (!out.max_steps)
    out.max_steps = static_cast<std::size_t>(std::ceil(10.0 * std::log(static_cast<double>(n))));
  if (!out.min_bandwidth_floor)
    out.min_bandwidth_floor = 1e-3 * h0;
  if (out.threshold.kind == ThresholdMode::Kind::modified && !out.threshold.rho_n)
    out.threshold.rho_n = 0.1 * h0 * h0;
  if (out.sigma.kind != SigmaMode::Kind::known && !out.sigma.pairs)
    out.sigma.pairs = default_pair_count(n);
  return out;
}

BetaH0 default_parameters(std::size_t n, double c0, double alpha)
{
  if (n < 3)
    throw ConfigError("default_parameters needs n >= 3");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("alpha must lie in (0, 1)");
  const double log_n = std::log(static_cast<double>(n));
  return { std::exp(-alpha * log_n / (log_n * log_n * log_n)), c0 / std::log(log_n) };
}

double resolve_sigma(const Dataset& data, const SigmaMode& mode)
{
  const std::size_t J = mode.pairs.value_or(default_pair_count(data.n()));
  switch (mode.kind) {
    case SigmaMode::Kind::known:
      return mode.value;
    case SigmaMode::Kind::rice:
      return sigma_rice(data, J);
    case SigmaMode::Kind::median:
      return sigma_median(data, J, MedianVariant::mean_based);
    case SigmaMode::Kind::paper_literal:
      return sigma_median(data, J, MedianVariant::paper_literal);
  }
  return 0.0;
}

BandwidthState::BandwidthState(std::size_t d, double h0)
  : h(Vector::Constant(static_cast<Eigen::Index>(d), h0))
  , active(d, true)
{
}

bool BandwidthState::any_active() const
{
  for (bool a : active)
    if (a)
      return true;
  return false;
}

namespace {

double step_threshold(const RodeoConfig& cfg, double s, std::size_t n, std::size_t t)
{
  if (cfg.threshold.kind == ThresholdMode::Kind::modified)
    return threshold_modified(s, n, cfg.c_n, *cfg.threshold.rho_n, t, cfg.beta);
  return threshold_hard(s, n, cfg.c_n);
}

void check_eval_points(const Dataset& data, const Matrix& points)
{
  if (points.rows() < 1)
    throw ConfigError("need at least one evaluation point");
  if (points.cols() != static_cast<Eigen::Index>(data.d()))
    throw ConfigError("evaluation points must have " + std::to_string(data.d()) + " columns");
}

struct PathOutcome
{
  RodeoResult result;
  double initial_fit = 0.0;
};

// Shared bandwidth loop of the hard and soft rodeo.
PathOutcome run_path(const Dataset& data, const Vector& x, const RodeoConfig& config)
{
  const RodeoConfig cfg = config.resolved(data.n());
  if (x.size() != static_cast<Eigen::Index>(data.d()))
    throw ConfigError("point must have " + std::to_string(data.d()) + " coordinates");

  const std::size_t n = data.n();
  const std::size_t d = data.d();
  // fail on an invalid threshold before any fitting
  threshold_hard(0.0, n, cfg.c_n);

  PathOutcome out;
  RodeoResult& res = out.result;
  res.sigma_used = resolve_sigma(data, cfg.sigma);

  BandwidthState state(d, cfg.h0);
  while (state.any_active() && state.t < *cfg.max_steps) {
    ++state.t;
    std::optional<LocalSystem> system;
    try {
      system.emplace(data, x, state.h, cfg.kernel, cfg.degree);
    } catch (const FitError& e) {
      throw RodeoFailure("fit failed at step " + std::to_string(state.t) + ": " + e.what(),
                         std::move(res.trace));
    }
    if (state.t == 1)
      out.initial_fit = system->fit().mhat;

    Vector next = state.h;
    std::vector<bool> next_active = state.active;
    for (std::size_t j = 0; j < d; ++j) {
      if (!state.active[j])
        continue;
      const auto col = static_cast<Eigen::Index>(j);
      DerivativeStat stat = derivative_stat(*system, j, res.sigma_used);
      stat.lambda = step_threshold(cfg, stat.s, n, state.t);
      stat.above_threshold = std::abs(stat.Z) > stat.lambda;

      double dh = 0.0;
      if (stat.above_threshold && cfg.beta * state.h[col] >= *cfg.min_bandwidth_floor) {
        next[col] = cfg.beta * state.h[col];
        dh = (1.0 - cfg.beta) * state.h[col];
      } else {
        next_active[j] = false;
      }
      const double soft = std::copysign(std::max(std::abs(stat.Z) - stat.lambda, 0.0), stat.Z);
      res.soft_correction += soft * dh;

      res.trace.push_back({ state.t, j, stat.Z, stat.s, stat.lambda, state.h[col], next[col], next_active[j] });
    }
    state.h = next;
    state.active = next_active;
  }

  res.steps_taken = state.t;
  res.h_star = state.h;
  return out;
}

} // namespace

RodeoResult rodeo_hard(const Dataset& data, const Vector& x, const RodeoConfig& config)
{
  PathOutcome path = run_path(data, x, config);
  RodeoResult res = std::move(path.result);
  res.soft_correction = 0.0;
  try {
    res.estimate = local_fit(data, x, res.h_star, config.kernel, config.degree).mhat;
  } catch (const FitError& e) {
    throw RodeoFailure(std::string("final fit failed: ") + e.what(), std::move(res.trace));
  }
  return res;
}

RodeoResult rodeo_soft(const Dataset& data, const Vector& x, const RodeoConfig& config)
{
  PathOutcome path = run_path(data, x, config);
  RodeoResult res = std::move(path.result);
  res.estimate = path.initial_fit - res.soft_correction;
  return res;
}

GlobalStat global_stat(const Matrix& G, const Vector& Y, double sigma, double c_n, std::size_t j)
{
  const auto n = static_cast<double>(G.rows());
  const auto k = static_cast<double>(G.cols());
  GlobalStat stat;
  stat.j = j;
  stat.T = (G.transpose() * Y).squaredNorm() / k;
  stat.trace_P = G.squaredNorm();
  stat.trace_PP = (G.transpose() * G).squaredNorm();
  const double nc = n * c_n;
  if (!(nc > 1.0))
    throw ConfigError("threshold needs n * c_n > 1");
  const double s2k = sigma * sigma / k;
  stat.lambda = s2k * stat.trace_P + 2.0 * s2k * std::sqrt(stat.trace_PP * std::log(nc));
  return stat;
}

GlobalResult rodeo_global(const Dataset& data, const Matrix& eval_points, const RodeoConfig& config)
{
  const RodeoConfig cfg = config.resolved(data.n());
  check_eval_points(data, eval_points);
  const std::size_t d = data.d();
  const auto k = eval_points.rows();

  GlobalResult res;
  res.sigma_used = resolve_sigma(data, cfg.sigma);
  BandwidthState state(d, cfg.h0);

  while (state.any_active() && state.t < *cfg.max_steps) {
    ++state.t;
    std::vector<LocalSystem> systems;
    systems.reserve(static_cast<std::size_t>(k));
    try {
      for (Eigen::Index i = 0; i < k; ++i)
        systems.emplace_back(data, eval_points.row(i).transpose(), state.h, cfg.kernel, cfg.degree);
    } catch (const FitError& e) {
      throw FitError("global rodeo fit failed at step " + std::to_string(state.t) + ": " + e.what());
    }

    Vector next = state.h;
    std::vector<bool> next_active = state.active;
    Matrix G(static_cast<Eigen::Index>(data.n()), k);
    for (std::size_t j = 0; j < d; ++j) {
      if (!state.active[j])
        continue;
      const auto col = static_cast<Eigen::Index>(j);
      for (Eigen::Index i = 0; i < k; ++i)
        G.col(i) = systems[static_cast<std::size_t>(i)].derivative_weights(j);
      const GlobalStat stat = global_stat(G, data.Y(), res.sigma_used, cfg.c_n, j);
      if (stat.T > stat.lambda && cfg.beta * state.h[col] >= *cfg.min_bandwidth_floor)
        next[col] = cfg.beta * state.h[col];
      else
        next_active[j] = false;
      res.trace.push_back({ state.t, stat, state.h[col], next[col], next_active[j] });
    }
    state.h = next;
    state.active = next_active;
  }

  res.steps_taken = state.t;
  res.h_star = state.h;
  res.estimates.resize(k);
  for (Eigen::Index i = 0; i < k; ++i)
    res.estimates[i] = local_fit(data, eval_points.row(i).transpose(), res.h_star, cfg.kernel, cfg.degree).mhat;
  return res;
}

GreedyResult rodeo_greedy(const Dataset& data,
                          const Matrix& eval_points,
                          const RodeoConfig& config,
                          std::size_t n_steps)
{
  if (n_steps < 1)
    throw ConfigError("greedy rodeo needs at least one step");
  const RodeoConfig cfg = config.resolved(data.n());
  check_eval_points(data, eval_points);
  const std::size_t d = data.d();
  const auto k = eval_points.rows();
  const double root = threshold_hard(1.0, data.n(), cfg.c_n);

  GreedyResult res;
  Vector h = Vector::Constant(static_cast<Eigen::Index>(d), cfg.h0);
  std::vector<bool> selected(d, false);

  for (std::size_t t = 1; t <= n_steps; ++t) {
    Vector scores = Vector::Zero(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < k; ++i) {
      const LocalSystem system(data, eval_points.row(i).transpose(), h, cfg.kernel, cfg.degree);
      for (std::size_t j = 0; j < d; ++j) {
        const double lambda = system.derivative_weights(j).norm() * root;
        if (lambda > 0.0)
          scores[static_cast<Eigen::Index>(j)] += std::abs(system.derivative(j)) / lambda;
      }
    }
    scores /= static_cast<double>(k);

    std::optional<std::size_t> winner;
    for (std::size_t j = 0; j < d; ++j) {
      const auto col = static_cast<Eigen::Index>(j);
      if (cfg.beta * h[col] < *cfg.min_bandwidth_floor)
        continue;
      if (!winner || scores[col] > scores[static_cast<Eigen::Index>(*winner)])
        winner = j;
    }
    if (!winner)
      break;

    const auto col = static_cast<Eigen::Index>(*winner);
    GreedyStep step{ t, *winner, scores, h[col], cfg.beta * h[col] };
    h[col] = step.h_after;
    if (!selected[*winner]) {
      selected[*winner] = true;
      res.selection_order.push_back(*winner);
    }
    res.steps.push_back(std::move(step));
  }
  res.h_star = h;
  return res;
}

Matrix pseudo_covariates(const Dataset& data,
                         const Vector& x,
                         const Vector& h,
                         const std::optional<Vector>& h_prime,
                         const KernelSpec& kernel,
                         SmootherDegree degree)
{
  const auto n = static_cast<Eigen::Index>(data.n());
  const std::size_t d = data.d();
  Matrix out(n, static_cast<Eigen::Index>(d));
  const LocalSystem base(data, x, h, kernel, degree);
  for (std::size_t j = 0; j < d; ++j)
    out.col(static_cast<Eigen::Index>(j)) = base.derivative_weights(j);
  if (h_prime) {
    const LocalSystem shifted(data, x, *h_prime, kernel, degree);
    for (std::size_t j = 0; j < d; ++j)
      out.col(static_cast<Eigen::Index>(j)) = shifted.derivative_weights(j) - out.col(static_cast<Eigen::Index>(j));
  }
  return out;
}

} // namespace rodeo
