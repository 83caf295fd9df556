#pragma once

#include <rodeo/smoother.hpp>

#include <cstddef>

namespace rodeo {

//! Derivative statistic for one variable at one bandwidth.
struct DerivativeStat
{
  std::size_t j = 0;
  double Z = 0.0;      // d mhat / d h_j
  double s = 0.0;      // conditional standard deviation of Z
  double lambda = 0.0; // threshold
  bool above_threshold = false;
};

//! Diagonal of L_j, with d W / d h_j = W L_j.
Vector log_kernel_derivative_diag(const KernelSpec& kernel,
                                  const Dataset& data,
                                  const Vector& x,
                                  const Vector& h,
                                  std::size_t j);

//! Z_j = d mhat_h(x) / d h_j, evaluated through the fit residuals in
//! O(n p + p^2) without forming any n x n matrix.
double z_statistic(const Dataset& data,
                   const Vector& x,
                   const Vector& h,
                   const KernelSpec& kernel,
                   std::size_t j,
                   SmootherDegree degree = SmootherDegree::local_linear);

//! Exact conditional standard deviation sigma * ||g_j|| of Z_j.
double s_statistic(const Dataset& data,
                   const Vector& x,
                   const Vector& h,
                   const KernelSpec& kernel,
                   std::size_t j,
                   double sigma,
                   SmootherDegree degree = SmootherDegree::local_linear);

//! The weight vector g_j with Z_j = g_j'Y.
Vector derivative_weights(const Dataset& data,
                          const Vector& x,
                          const Vector& h,
                          const KernelSpec& kernel,
                          std::size_t j,
                          SmootherDegree degree = SmootherDegree::local_linear);

//! s * sqrt(2 log(n c_n)). Requires n * c_n > 1.
double threshold_hard(double s, std::size_t n, double c_n);

//! rho_n beta^(3t) + s sqrt(2 log(n c_n)), for step t >= 1.
double threshold_modified(double s,
                          std::size_t n,
                          double c_n,
                          double rho_n,
                          std::size_t t,
                          double beta);

//! Z_j and s_j for one variable from an already factored system.
DerivativeStat derivative_stat(const LocalSystem& system, std::size_t j, double sigma);

} // namespace rodeo
