#include <rodeo/errors.hpp>
#include <rodeo/smoother.hpp>

#include <cmath>
#include <string>

namespace rodeo {

namespace {

void check_point(const Dataset& data, const Vector& x, const Vector& h)
{
  const auto d = static_cast<Eigen::Index>(data.d());
  if (x.size() != d || h.size() != d)
    throw ConfigError("point and bandwidth must have " + std::to_string(d) +
                      " coordinates");
  if (!x.allFinite())
    throw ConfigError("evaluation point contains non-finite values");
  for (Eigen::Index j = 0; j < d; ++j) {
    if (!(h[j] > 0.0) || !std::isfinite(h[j]))
      throw ConfigError("bandwidth h[" + std::to_string(j) +
                        "] must be positive and finite");
  }
}

// Smallest admissible squared Cholesky pivot of the equilibrated matrix
// (unit diagonal) before the system counts as rank deficient.
constexpr double min_pivot_sq = 1e-12;

bool factorize(const Matrix& A, Vector& scaling, Eigen::LLT<Matrix>& llt, bool check_pivots)
{
  const auto p = A.rows();
  scaling.resize(p);
  for (Eigen::Index k = 0; k < p; ++k)
    scaling[k] = A(k, k) > 0.0 ? 1.0 / std::sqrt(A(k, k)) : 1.0;
  const Matrix scaled = scaling.asDiagonal() * A * scaling.asDiagonal();
  llt.compute(scaled);
  if (llt.info() != Eigen::Success)
    return false;
  const Vector pivots = llt.matrixLLT().diagonal();
  if (!pivots.allFinite())
    return false;
  if (check_pivots && pivots.cwiseAbs2().minCoeff() < min_pivot_sq)
    return false;
  return true;
}

} // namespace

Vector weight_vector(const Dataset& data, const Vector& x, const Vector& h, const KernelSpec& kernel)
{
  check_point(data, x, h);
  const auto& X = data.X();
  Vector w(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    double wi = 1.0;
    for (Eigen::Index j = 0; j < X.cols() && wi != 0.0; ++j)
      wi *= kernel_value(kernel, (X(i, j) - x[j]) / h[j]);
    w[i] = wi;
  }
  return w;
}

LocalSystem::LocalSystem(const Dataset& data,
                         const Vector& x,
                         const Vector& h,
                         const KernelSpec& kernel,
                         SmootherDegree degree)
  : y_(data.Y())
  , h_(h)
  , kernel_(kernel)
{
  weights_ = weight_vector(data, x, h, kernel);
  offsets_ = data.X().rowwise() - x.transpose();

  const auto n = offsets_.rows();
  const auto d = offsets_.cols();
  const Eigen::Index p = degree == SmootherDegree::local_linear ? d + 1 : 1;

  design_.resize(n, p);
  design_.col(0).setOnes();
  if (p > 1)
    design_.rightCols(d) = offsets_;

  const auto support = (weights_.array() > 0.0).count();
  if (support < p)
    throw InsufficientSupport("only " + std::to_string(support) +
                              " observations have nonzero kernel weight; need " +
                              std::to_string(p));

  const Matrix weighted = weights_.asDiagonal() * design_;
  Matrix normal = design_.transpose() * weighted;
  if (!factorize(normal, equilibration_, llt_, true)) {
    const double ridge = 1e-10 * normal.trace() / static_cast<double>(p);
    normal.diagonal().array() += ridge;
    if (!factorize(normal, equilibration_, llt_, false))
      throw Singular("weighted normal matrix is singular after ridge retry");
    conditioning_ = Conditioning::ridge_stabilized;
  }

  alpha_ = solve(weighted.transpose() * y_);
  Vector e1 = Vector::Zero(p);
  e1[0] = 1.0;
  const Vector first_row = solve(e1);
  smoother_row_ = weights_.cwiseProduct(design_ * first_row);
  residual_ = y_ - design_ * alpha_;
}

Vector LocalSystem::solve(const Vector& rhs) const
{
  return equilibration_.cwiseProduct(llt_.solve(equilibration_.cwiseProduct(rhs)));
}

FitResult LocalSystem::fit() const
{
  FitResult out;
  out.mhat = alpha_[0];
  out.alpha_hat = alpha_;
  out.effective_weights = smoother_row_;
  out.condition_flag = conditioning_;
  return out;
}

Vector LocalSystem::log_weight_derivative(std::size_t j) const
{
  const auto col = static_cast<Eigen::Index>(j);
  if (col >= offsets_.cols())
    throw ConfigError("variable index " + std::to_string(j) + " out of range");
  Vector L(offsets_.rows());
  for (Eigen::Index i = 0; i < offsets_.rows(); ++i)
    L[i] = log_kernel_dh(kernel_, offsets_(i, col), h_[col]);
  return L;
}

double LocalSystem::derivative(std::size_t j) const
{
  const Vector L = log_weight_derivative(j);
  return (smoother_row_.array() * L.array() * residual_.array()).sum();
}

Vector LocalSystem::derivative_weights(std::size_t j) const
{
  // g' = u'(I - X_x B) with u = L_j S_x' and B = (X'WX)^{-1} X'W
  const Vector u = smoother_row_.cwiseProduct(log_weight_derivative(j));
  const Vector c = solve(design_.transpose() * u);
  return u - weights_.cwiseProduct(design_ * c);
}

FitResult local_fit(const Dataset& data,
                    const Vector& x,
                    const Vector& h,
                    const KernelSpec& kernel,
                    SmootherDegree degree)
{
  return LocalSystem(data, x, h, kernel, degree).fit();
}

FitResult local_linear_fit(const Dataset& data, const Vector& x, const Vector& h, const KernelSpec& kernel)
{
  return local_fit(data, x, h, kernel, SmootherDegree::local_linear);
}

} // namespace rodeo
