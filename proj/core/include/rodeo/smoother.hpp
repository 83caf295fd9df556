#pragma once

#include <rodeo/dataset.hpp>
#include <rodeo/kernel.hpp>

#include <Eigen/Cholesky>

namespace rodeo {

//! Degree of the local polynomial. Local constant is Nadaraya-Watson kernel
//! regression; local linear is the default everywhere.
enum class SmootherDegree
{
  local_constant,
  local_linear
};

enum class Conditioning
{
  well_posed,
  ridge_stabilized
};

struct FitResult
{
  double mhat = 0.0;
  //! Intercept followed by the local slopes (slopes only for local linear).
  Vector alpha_hat;
  //! Row S_x of the smoother: mhat = effective_weights . Y.
  Vector effective_weights;
  Conditioning condition_flag = Conditioning::well_posed;
};

//! Unnormalized product-kernel weights W_i = prod_j K((X_ij - x_j) / h_j).
Vector weight_vector(const Dataset& data,
                     const Vector& x,
                     const Vector& h,
                     const KernelSpec& kernel);

//! Weighted least-squares system of a local polynomial fit at one point.
//!
//! Holds the kernel weights, the centered design and a factorization of
//! X_x' W X_x so that the fit, its bandwidth derivatives and the weight
//! vectors representing them can all be evaluated without refactoring.
//! The normal matrix is Jacobi-equilibrated before the Cholesky step; if
//! that fails (or is numerically rank deficient) one retry is made with a
//! ridge of 1e-10 * trace / p on the diagonal.
class LocalSystem
{
public:
  //! Throws ConfigError on a nonpositive bandwidth or dimension mismatch,
  //! InsufficientSupport when fewer than p weights are nonzero, Singular
  //! when the ridge retry also fails.
  LocalSystem(const Dataset& data,
              const Vector& x,
              const Vector& h,
              const KernelSpec& kernel,
              SmootherDegree degree = SmootherDegree::local_linear);

  std::size_t parameters() const { return static_cast<std::size_t>(design_.cols()); }
  const Vector& weights() const { return weights_; }
  Conditioning conditioning() const { return conditioning_; }

  FitResult fit() const;

  //! Z_j via the residual form sum_i S_xi L_ji r_i.
  double derivative(std::size_t j) const;

  //! The n-vector g with Z_j = g'Y for every response vector.
  Vector derivative_weights(std::size_t j) const;

  //! Diagonal of L_j.
  Vector log_weight_derivative(std::size_t j) const;

private:
  Vector solve(const Vector& rhs) const;

  Matrix offsets_;
  Vector y_;
  Vector h_;
  KernelSpec kernel_;
  Matrix design_;
  Vector weights_;
  Vector equilibration_;
  Eigen::LLT<Matrix> llt_;
  Conditioning conditioning_ = Conditioning::well_posed;
  Vector alpha_;
  Vector smoother_row_;
  Vector residual_;
};

//! Local linear estimate of m(x) with its effective kernel.
FitResult local_linear_fit(const Dataset& data,
                           const Vector& x,
                           const Vector& h,
                           const KernelSpec& kernel);

FitResult local_fit(const Dataset& data,
                    const Vector& x,
                    const Vector& h,
                    const KernelSpec& kernel,
                    SmootherDegree degree);

} // namespace rodeo
