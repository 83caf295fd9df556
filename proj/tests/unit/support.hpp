#pragma once

// Generators and independent oracles shared by the unit tests. Nothing here
// calls into LocalSystem; the oracles re-derive every quantity from the
// defining formulas.

#include <rodeo/dataset.hpp>
#include <rodeo/kernel.hpp>
#include <rodeo/smoother.hpp>

#include <Eigen/LU>

#include <cmath>
#include <random>

namespace rodeo::testing {

inline Dataset random_dataset(std::size_t n, std::size_t d, std::uint64_t seed, double noise = 1.0)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> eps(0.0, 1.0);
  Matrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  Vector Y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    double signal = 0.0;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      X(i, j) = unif(rng);
      signal += std::sin(3.0 * X(i, j) + static_cast<double>(j)) * (j % 2 == 0 ? 1.0 : 0.5);
    }
    Y[i] = signal + noise * eps(rng);
  }
  return Dataset(std::move(X), std::move(Y));
}

inline Vector uniform_vector(std::size_t d, double lo, double hi, std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> unif(lo, hi);
  Vector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < v.size(); ++j)
    v[j] = unif(rng);
  return v;
}

//! Kernel evaluated straight from its closed form.
inline double raw_kernel(KernelFamily family, double u)
{
  if (family == KernelFamily::gaussian)
    return std::exp(-u * u / 2.0);
  return u * u <= 5.0 ? 5.0 - u * u : 0.0;
}

//! Elementwise product-kernel loop.
inline Vector oracle_weights(const Dataset& data, const Vector& x, const Vector& h, KernelFamily family)
{
  Vector w(data.X().rows());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    double prod = 1.0;
    for (Eigen::Index j = 0; j < data.X().cols(); ++j)
      prod *= raw_kernel(family, (data.X()(i, j) - x[j]) / h[j]);
    w[i] = prod;
  }
  return w;
}

//! Local linear estimate from explicitly assembled normal equations, solved
//! with full-pivot LU.
inline double oracle_local_linear(const Dataset& data, const Vector& x, const Vector& h, KernelFamily family)
{
  const Vector w = oracle_weights(data, x, h, family);
  const auto n = data.X().rows();
  const auto d = data.X().cols();
  Matrix A = Matrix::Zero(d + 1, d + 1);
  Vector b = Vector::Zero(d + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector row(d + 1);
    row[0] = 1.0;
    for (Eigen::Index j = 0; j < d; ++j)
      row[j + 1] = data.X()(i, j) - x[j];
    A += w[i] * row * row.transpose();
    b += w[i] * row * data.Y()[i];
  }
  return Eigen::FullPivLU<Matrix>(A).solve(b)[0];
}

//! Central finite difference of mhat in h_j with relative step 1e-5 h_j.
inline double oracle_fd_derivative(const Dataset& data,
                                   const Vector& x,
                                   const Vector& h,
                                   const KernelSpec& kernel,
                                   std::size_t j,
                                   SmootherDegree degree = SmootherDegree::local_linear)
{
  const auto col = static_cast<Eigen::Index>(j);
  const double delta = 1e-5 * h[col];
  Vector hp = h;
  Vector hm = h;
  hp[col] += delta;
  hm[col] -= delta;
  return (local_fit(data, x, hp, kernel, degree).mhat - local_fit(data, x, hm, kernel, degree).mhat) / (2.0 * delta);
}

//! g with Z_j = g'Y, recovered by evaluating Z_j on unit responses e_i.
template <typename ZFunction>
Vector probe_unit_responses(const Dataset& data, ZFunction&& z)
{
  const auto n = data.X().rows();
  Vector g(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e[i] = 1.0;
    g[i] = z(data.with_response(std::move(e)));
  }
  return g;
}

} // namespace rodeo::testing
