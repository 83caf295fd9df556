#include <rodeo/experiments.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

namespace rodeo {

ExampleName example_from_name(std::string_view name)
{
  if (name == "quad2")
    return ExampleName::quad2;
  if (name == "cubesin")
    return ExampleName::cubesin;
  if (name == "onedim")
    return ExampleName::onedim;
  if (name == "turlach")
    return ExampleName::turlach;
  throw ConfigError("unknown example '" + std::string(name) + "'");
}

std::string_view example_name(ExampleName name)
{
  switch (name) {
    case ExampleName::quad2:
      return "quad2";
    case ExampleName::cubesin:
      return "cubesin";
    case ExampleName::onedim:
      return "onedim";
    case ExampleName::turlach:
      return "turlach";
  }
  return "unknown";
}

std::vector<std::size_t> relevant_variables(ExampleName name)
{
  switch (name) {
    case ExampleName::quad2:
    case ExampleName::cubesin:
      return { 0, 1 };
    case ExampleName::onedim:
      return { 0 };
    case ExampleName::turlach:
      return { 0, 1, 2, 3, 4 };
  }
  return {};
}

double example_truth(ExampleName name, const Vector& x)
{
  switch (name) {
    case ExampleName::quad2:
      return 5.0 * x[0] * x[0] * x[1] * x[1];
    case ExampleName::cubesin: {
      const double a = x[0] + 1.0;
      return 2.0 * a * a * a + 2.0 * std::sin(10.0 * x[1]);
    }
    case ExampleName::onedim:
      return std::sin(15.0 / x[0]) / x[0];
    case ExampleName::turlach: {
      const double c = x[0] - 0.5;
      return c * c + x[1] + x[2] + x[3] + x[4];
    }
  }
  return 0.0;
}

void ExampleSpec::validate() const
{
  if (n < 2)
    throw ConfigError("example needs n >= 2");
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw ConfigError("example sigma must be finite and nonnegative");
  switch (name) {
    case ExampleName::onedim:
      if (d != 1)
        throw ConfigError("onedim is one-dimensional (d = 1)");
      break;
    case ExampleName::quad2:
    case ExampleName::cubesin:
      if (d < 2)
        throw ConfigError(std::string(example_name(name)) + " needs d >= 2");
      break;
    case ExampleName::turlach:
      if (d < 5)
        throw ConfigError("turlach needs d >= 5");
      break;
  }
}

ExampleSpec default_example(ExampleName name)
{
  switch (name) {
    case ExampleName::quad2:
      return { name, 500, 10, 0.5, 0 };
    case ExampleName::cubesin:
      return { name, 750, 20, 1.0, 0 };
    case ExampleName::onedim:
      return { name, 1500, 1, 0.5, 0 };
    case ExampleName::turlach:
      return { name, 2000, 10, 0.05, 0 };
  }
  return {};
}

GeneratedData generate(const ExampleSpec& spec)
{
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);

  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto d = static_cast<Eigen::Index>(spec.d);
  const double shift = spec.name == ExampleName::onedim ? 0.5 : 0.0;
  Matrix X(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      X(i, j) = unif(rng) + shift;

  Vector Y(n);
  for (Eigen::Index i = 0; i < n; ++i)
    Y[i] = example_truth(spec.name, X.row(i).transpose());
  if (spec.sigma > 0.0)
    for (Eigen::Index i = 0; i < n; ++i)
      Y[i] += spec.sigma * noise(rng);

  const ExampleName name = spec.name;
  return { Dataset(std::move(X), std::move(Y)),
           [name](const Vector& x) { return example_truth(name, x); },
           relevant_variables(name) };
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index)
{
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ stream) ^ index);
}

std::size_t worker_count()
{
  if (const char* env = std::getenv("RODEO_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value >= 1)
      return static_cast<std::size_t>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn)
{
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      fn(i);
    return;
  }

  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure)
            failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
}

std::vector<double> default_loocv_grid()
{
  constexpr std::size_t count = 30;
  const double lo = std::log(0.05);
  const double hi = std::log(2.0);
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return grid;
}

LoocvResult loocv_single_bandwidth(const Dataset& data, const std::vector<double>& grid, const KernelSpec& kernel)
{
  if (grid.empty())
    throw ConfigError("LOOCV grid is empty");
  for (double h : grid)
    if (!(h > 0.0))
      throw ConfigError("LOOCV grid values must be positive");

  const auto n = static_cast<Eigen::Index>(data.n());
  const auto d = static_cast<Eigen::Index>(data.d());
  const double total_ss = (data.Y().array() - data.Y().mean()).square().sum();

  LoocvResult res;
  res.scores.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const Vector h = Vector::Constant(d, grid[g]);
    double score = 0.0;
    bool feasible = true;
    for (Eigen::Index i = 0; i < n && feasible; ++i) {
      try {
        const FitResult fit = local_linear_fit(data, data.X().row(i).transpose(), h, kernel);
        const double leverage = fit.effective_weights[i];
        if (!(1.0 - leverage > 1e-12)) {
          feasible = false;
          break;
        }
        const double r = (data.Y()[i] - fit.mhat) / (1.0 - leverage);
        score += r * r;
      } catch (const FitError&) {
        feasible = false;
      }
    }
    if (feasible && std::isfinite(score))
      res.scores[g] = score;
  }

  // ascending bandwidth order, so ties resolve to the smaller h
  std::vector<std::size_t> order(grid.size());
  for (std::size_t g = 0; g < order.size(); ++g)
    order[g] = g;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });

  std::optional<std::size_t> best;
  for (std::size_t g : order) {
    if (std::isnan(res.scores[g]))
      continue;
    if (!best) {
      best = g;
      continue;
    }
    const double incumbent = res.scores[*best];
    if (res.scores[g] < incumbent - 1e-12 * (incumbent + total_ss))
      best = g;
  }
  if (!best)
    throw FitError("no feasible bandwidth in the LOOCV grid");
  res.h_cv = grid[*best];
  return res;
}

TestPoints TestPoints::center(std::size_t d)
{
  TestPoints tp;
  tp.fixed = Matrix::Constant(1, static_cast<Eigen::Index>(d), 0.5);
  return tp;
}

TestPoints TestPoints::random(std::size_t count)
{
  TestPoints tp;
  tp.random_count = count;
  return tp;
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q)
{
  if (sorted.empty())
    return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

RiskSummary summarize_errors(std::vector<double> errors, std::size_t replicates, std::size_t failures)
{
  RiskSummary s;
  s.replicates = replicates;
  s.failures = failures;
  std::vector<double> sorted = errors;
  std::sort(sorted.begin(), sorted.end());
  s.errors = std::move(errors);
  if (sorted.empty()) {
    s.mean = s.median = s.q25 = s.q75 = s.min = s.max = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sum = 0.0;
  for (double e : sorted)
    sum += e;
  s.mean = sum / static_cast<double>(sorted.size());
  s.median = quantile_sorted(sorted, 0.5);
  s.q25 = quantile_sorted(sorted, 0.25);
  s.q75 = quantile_sorted(sorted, 0.75);
  s.min = sorted.front();
  s.max = sorted.back();
  return s;
}

RiskSummary pointwise_risk(const PointEngine& engine,
                           const ExampleSpec& spec,
                           const TestPoints& points,
                           std::size_t replicates)
{
  if (replicates < 1)
    throw ConfigError("need at least one replicate");
  spec.validate();
  if (points.random_count == 0 && points.fixed.rows() == 0)
    throw ConfigError("no test points");
  if (points.random_count == 0 && points.fixed.cols() != static_cast<Eigen::Index>(spec.d))
    throw ConfigError("test points must have d columns");

  std::vector<std::vector<double>> per_rep(replicates);
  std::vector<char> failed(replicates, 0);

  parallel_for(replicates, [&](std::size_t r) {
    ExampleSpec rep = spec;
    rep.seed = derive_seed(spec.seed, streams::data, r);
    const GeneratedData gen = generate(rep);

    Matrix pts = points.fixed;
    if (points.random_count > 0) {
      std::mt19937_64 rng(derive_seed(spec.seed, streams::test_points, r));
      std::uniform_real_distribution<double> unif(points.lo, points.hi);
      pts.resize(static_cast<Eigen::Index>(points.random_count), static_cast<Eigen::Index>(spec.d));
      for (Eigen::Index i = 0; i < pts.rows(); ++i)
        for (Eigen::Index j = 0; j < pts.cols(); ++j)
          pts(i, j) = unif(rng) + (spec.name == ExampleName::onedim ? 0.5 : 0.0);
    }

    std::vector<double> errs;
    try {
      for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        const Vector x = pts.row(i).transpose();
        const double diff = engine(gen.data, x) - gen.truth(x);
        errs.push_back(diff * diff);
      }
    } catch (const Error&) {
      failed[r] = 1;
      return;
    }
    per_rep[r] = std::move(errs);
  });

  std::vector<double> all;
  std::size_t failures = 0;
  for (std::size_t r = 0; r < replicates; ++r) {
    if (failed[r]) {
      ++failures;
      continue;
    }
    all.insert(all.end(), per_rep[r].begin(), per_rep[r].end());
  }
  return summarize_errors(std::move(all), replicates, failures);
}

double TheoryModel::density() const
{
  return 1.0 / std::pow(hi - lo, static_cast<double>(d));
}

Matrix TheoryModel::sample_design(std::size_t n, std::mt19937_64& rng) const
{
  std::uniform_real_distribution<double> unif(lo, hi);
  Matrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      X(i, j) = unif(rng);
  return X;
}

TheoryModel TheoryModel::first_squared(std::size_t d, double lo, double hi)
{
  TheoryModel model;
  model.m = [](const Vector& x) { return x[0] * x[0]; };
  model.m_jj = [](const Vector&, std::size_t j) { return j == 0 ? 2.0 : 0.0; };
  model.d = d;
  model.lo = lo;
  model.hi = hi;
  return model;
}

TheoryModel TheoryModel::linear(std::size_t d, double lo, double hi)
{
  TheoryModel model;
  model.m = [d](const Vector& x) {
    double v = 1.0;
    for (std::size_t j = 0; j < d; ++j)
      v += static_cast<double>(j + 1) * x[static_cast<Eigen::Index>(j)] / static_cast<double>(d);
    return v;
  };
  model.m_jj = [](const Vector&, std::size_t) { return 0.0; };
  model.d = d;
  model.lo = lo;
  model.hi = hi;
  return model;
}

KernelMoments kernel_moments(const KernelSpec& kernel)
{
  using boost::math::quadrature::gauss_kronrod;
  const double r = kernel.support_radius;
  const double a = std::isfinite(r) ? -r : -std::numeric_limits<double>::infinity();
  const double b = std::isfinite(r) ? r : std::numeric_limits<double>::infinity();
  auto K = [&](double u) { return kernel_value(kernel, u); };

  KernelMoments m;
  m.mass = gauss_kronrod<double, 61>::integrate(K, a, b, 15, 1e-13);
  m.nu2 = gauss_kronrod<double, 61>::integrate([&](double u) { return u * u * K(u); }, a, b, 15, 1e-13) / m.mass;
  m.square_integral =
    gauss_kronrod<double, 61>::integrate([&](double u) { return K(u) * K(u); }, a, b, 15, 1e-13) / (m.mass * m.mass);
  return m;
}

BiasCheck bias_check(const TheoryModel& model,
                     std::size_t n,
                     const Vector& x,
                     const Vector& h,
                     std::size_t j,
                     std::size_t replicates,
                     const KernelSpec& kernel,
                     std::uint64_t seed)
{
  if (replicates < 2)
    throw ConfigError("bias_check needs at least two replicates");
  std::vector<double> z(replicates);
  parallel_for(replicates, [&](std::size_t r) {
    std::mt19937_64 rng(derive_seed(seed, streams::data, r));
    Matrix X = model.sample_design(n, rng);
    Vector Y(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      Y[i] = model.m(X.row(i).transpose());
    z[r] = z_statistic(Dataset(std::move(X), std::move(Y)), x, h, kernel, j);
  });

  double mean = 0.0;
  for (double v : z)
    mean += v;
  mean /= static_cast<double>(replicates);
  double ss = 0.0;
  for (double v : z)
    ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(replicates - 1));

  BiasCheck out;
  out.empirical = mean;
  out.standard_error = sd / std::sqrt(static_cast<double>(replicates));
  out.predicted = kernel.nu2 * model.m_jj(x, j) * h[static_cast<Eigen::Index>(j)];
  return out;
}

VarianceCheck variance_check(const TheoryModel& model,
                             std::size_t n,
                             double sigma,
                             const Vector& x,
                             const Vector& h,
                             std::size_t j,
                             std::size_t replicates,
                             const KernelSpec& kernel,
                             std::uint64_t seed)
{
  if (replicates < 2)
    throw ConfigError("variance_check needs at least two replicates");
  if (!(sigma >= 0.0))
    throw ConfigError("sigma must be nonnegative");

  std::mt19937_64 rng(derive_seed(seed, streams::data, 0));
  Matrix X = model.sample_design(n, rng);
  Vector mean_response(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    mean_response[i] = model.m(X.row(i).transpose());
  const Dataset base(X, mean_response);
  const LocalSystem system(base, x, h, kernel);
  const Vector g = system.derivative_weights(j);

  // Z_j is linear in Y, so each replicate is g'(m + sigma eps)
  std::vector<double> z(replicates);
  parallel_for(replicates, [&](std::size_t r) {
    std::mt19937_64 noise_rng(derive_seed(seed, streams::noise, r));
    std::normal_distribution<double> eps(0.0, 1.0);
    Vector Y = mean_response;
    for (Eigen::Index i = 0; i < Y.size(); ++i)
      Y[i] += sigma * eps(noise_rng);
    z[r] = z_statistic(base.with_response(std::move(Y)), x, h, kernel, j);
  });

  double mean = 0.0;
  for (double v : z)
    mean += v;
  mean /= static_cast<double>(replicates);
  double ss = 0.0;
  for (double v : z)
    ss += (v - mean) * (v - mean);

  const KernelMoments moments = kernel_moments(kernel);
  double prod_h = 1.0;
  for (Eigen::Index k = 0; k < h.size(); ++k)
    prod_h *= h[k];
  const double hj = h[static_cast<Eigen::Index>(j)];
  const double C = sigma * sigma * std::pow(moments.square_integral, static_cast<double>(model.d)) / model.density();

  VarianceCheck out;
  out.empirical_sd = std::sqrt(ss / static_cast<double>(replicates - 1));
  out.exact_s = sigma * g.norm();
  out.asymptotic_s = std::sqrt(C / (static_cast<double>(n) * hj * hj * prod_h));
  return out;
}

ScalingCheck scaling_check(const std::vector<std::size_t>& ns,
                           const TheoryModel& model,
                           double sigma,
                           const Vector& x,
                           std::size_t j,
                           std::size_t replicates,
                           const RodeoConfig& config,
                           std::uint64_t seed)
{
  if (ns.size() < 3)
    throw ConfigError("scaling_check needs at least three sample sizes");
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1])
      throw ConfigError("sample sizes must be increasing");
  if (replicates < 1)
    throw ConfigError("need at least one replicate");
  if (j >= model.d)
    throw ConfigError("variable index out of range");

  RodeoConfig cfg = config;
  cfg.sigma = SigmaMode::known(sigma);

  ScalingCheck out;
  out.ns = ns;
  for (std::size_t n : ns) {
    std::vector<double> logs(replicates, std::numeric_limits<double>::quiet_NaN());
    parallel_for(replicates, [&](std::size_t r) {
      std::mt19937_64 rng(derive_seed(derive_seed(seed, streams::data, n), streams::data, r));
      std::normal_distribution<double> eps(0.0, 1.0);
      Matrix X = model.sample_design(n, rng);
      Vector Y(X.rows());
      for (Eigen::Index i = 0; i < X.rows(); ++i)
        Y[i] = model.m(X.row(i).transpose()) + sigma * eps(rng);
      try {
        const RodeoResult res = rodeo_hard(Dataset(std::move(X), std::move(Y)), x, cfg);
        logs[r] = std::log(res.h_star[static_cast<Eigen::Index>(j)]);
      } catch (const FitError&) {
      }
    });
    double sum = 0.0;
    std::size_t ok = 0;
    for (double v : logs) {
      if (std::isnan(v)) {
        ++out.failures;
        continue;
      }
      sum += v;
      ++ok;
    }
    if (ok == 0)
      throw FitError("every replicate failed at n = " + std::to_string(n));
    out.mean_log_h.push_back(sum / static_cast<double>(ok));
  }

  const auto k = static_cast<double>(ns.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double lx = std::log(static_cast<double>(ns[i]));
    sx += lx;
    sy += out.mean_log_h[i];
    sxx += lx * lx;
    sxy += lx * out.mean_log_h[i];
  }
  out.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return out;
}

} // namespace rodeo
