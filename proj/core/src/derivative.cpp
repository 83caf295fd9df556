#include <rodeo/derivative.hpp>
#include <rodeo/errors.hpp>

#include <cmath>
#include <string>

namespace rodeo {

Vector log_kernel_derivative_diag(const KernelSpec& kernel,
                                  const Dataset& data,
                                  const Vector& x,
                                  const Vector& h,
                                  std::size_t j)
{
  if (j >= data.d())
    throw ConfigError("variable index " + std::to_string(j) + " out of range");
  const auto col = static_cast<Eigen::Index>(j);
  if (!(h[col] > 0.0))
    throw ConfigError("bandwidth must be positive");
  Vector L(data.X().rows());
  for (Eigen::Index i = 0; i < L.size(); ++i)
    L[i] = log_kernel_dh(kernel, data.X()(i, col) - x[col], h[col]);
  return L;
}

double z_statistic(const Dataset& data,
                   const Vector& x,
                   const Vector& h,
                   const KernelSpec& kernel,
                   std::size_t j,
                   SmootherDegree degree)
{
  return LocalSystem(data, x, h, kernel, degree).derivative(j);
}

double s_statistic(const Dataset& data,
                   const Vector& x,
                   const Vector& h,
                   const KernelSpec& kernel,
                   std::size_t j,
                   double sigma,
                   SmootherDegree degree)
{
  if (!(sigma >= 0.0))
    throw ConfigError("sigma must be nonnegative");
  return sigma * derivative_weights(data, x, h, kernel, j, degree).norm();
}

Vector derivative_weights(const Dataset& data,
                          const Vector& x,
                          const Vector& h,
                          const KernelSpec& kernel,
                          std::size_t j,
                          SmootherDegree degree)
{
  return LocalSystem(data, x, h, kernel, degree).derivative_weights(j);
}

double threshold_hard(double s, std::size_t n, double c_n)
{
  const double nc = static_cast<double>(n) * c_n;
  if (!(nc > 1.0))
    throw ConfigError("threshold needs n * c_n > 1");
  if (!(s >= 0.0))
    throw ConfigError("s must be nonnegative");
  return s * std::sqrt(2.0 * std::log(nc));
}

double threshold_modified(double s,
                          std::size_t n,
                          double c_n,
                          double rho_n,
                          std::size_t t,
                          double beta)
{
  if (!(rho_n >= 0.0))
    throw ConfigError("rho_n must be nonnegative");
  if (!(beta > 0.0 && beta < 1.0))
    throw ConfigError("beta must lie in (0, 1)");
  if (t < 1)
    throw ConfigError("step counter starts at 1");
  return rho_n * std::pow(beta, 3.0 * static_cast<double>(t)) + threshold_hard(s, n, c_n);
}

DerivativeStat derivative_stat(const LocalSystem& system, std::size_t j, double sigma)
{
  DerivativeStat stat;
  stat.j = j;
  stat.Z = system.derivative(j);
  stat.s = sigma * system.derivative_weights(j).norm();
  return stat;
}

} // namespace rodeo
