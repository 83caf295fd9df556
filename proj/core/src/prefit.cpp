#include <rodeo/engines.hpp>

#include <cmath>
#include <string>

namespace rodeo {

namespace {

constexpr double lasso_gap_tolerance = 1e-8;
constexpr double kkt_tolerance = 1e-12;
constexpr std::size_t lasso_max_sweeps = 100000;

double soft_threshold(double z, double gamma)
{
  if (z > gamma)
    return z - gamma;
  if (z < -gamma)
    return z + gamma;
  return 0.0;
}

Vector ols_coefficients(const Dataset& data)
{
  const auto n = static_cast<Eigen::Index>(data.n());
  const auto d = static_cast<Eigen::Index>(data.d());
  if (n <= d + 1)
    throw ConfigError("ols prefit needs n > d + 1");
  Matrix design(n, d + 1);
  design.col(0).setOnes();
  design.rightCols(d) = data.X();
  const Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() < d + 1)
    throw Singular("linear prefit design is rank deficient");
  return qr.solve(data.Y());
}

// Cyclic coordinate descent on centered data. Stops on a duality gap below
// lasso_gap_tolerance, or for lambda1 = 0 (no bounded dual) when the
// largest gradient entry vanishes.
Vector lasso_coefficients(const Dataset& data, double lambda1)
{
  if (!(lambda1 >= 0.0))
    throw ConfigError("lasso penalty must be nonnegative");
  const auto n = static_cast<Eigen::Index>(data.n());
  const auto d = static_cast<Eigen::Index>(data.d());
  const double nd = static_cast<double>(n);

  const Vector x_mean = data.X().colwise().mean();
  const double y_mean = data.Y().mean();
  const Matrix Xc = data.X().rowwise() - x_mean.transpose();
  const Vector yc = data.Y().array() - y_mean;
  const Vector col_sq = Xc.colwise().squaredNorm() / nd;

  Vector b = Vector::Zero(d);
  Vector r = yc;
  const double scale = std::max(1.0, yc.squaredNorm() / (2.0 * nd));

  for (std::size_t sweep = 0; sweep < lasso_max_sweeps; ++sweep) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (col_sq[j] == 0.0)
        continue;
      const double rho = Xc.col(j).dot(r) / nd + col_sq[j] * b[j];
      const double updated = soft_threshold(rho, lambda1) / col_sq[j];
      if (updated != b[j]) {
        r -= (updated - b[j]) * Xc.col(j);
        b[j] = updated;
      }
    }

    const Vector grad = Xc.transpose() * r / nd;
    if (lambda1 == 0.0) {
      if (grad.cwiseAbs().maxCoeff() <= kkt_tolerance * std::sqrt(scale))
        break;
    } else {
      const double primal = r.squaredNorm() / (2.0 * nd) + lambda1 * b.lpNorm<1>();
      const double max_grad = grad.cwiseAbs().maxCoeff();
      const double shrink = max_grad > lambda1 ? lambda1 / max_grad : 1.0;
      const Vector u = shrink * r;
      const double dual = u.dot(yc) / nd - u.squaredNorm() / (2.0 * nd);
      if (primal - dual <= lasso_gap_tolerance)
        break;
    }
    if (sweep + 1 == lasso_max_sweeps)
      throw ConvergenceError("lasso did not converge in " + std::to_string(lasso_max_sweeps) + " sweeps");
  }

  Vector coef(d + 1);
  coef[0] = y_mean - x_mean.dot(b);
  coef.tail(d) = b;
  return coef;
}

} // namespace

LinearPrefit linear_prefit(const Dataset& data, const PrefitMethod& method)
{
  const Vector coef = method.kind == PrefitMethod::Kind::ols ? ols_coefficients(data)
                                                             : lasso_coefficients(data, method.lambda1);
  const Vector fitted = (data.X() * coef.tail(coef.size() - 1)).array() + coef[0];
  return { coef, data.with_response(data.Y() - fitted) };
}

} // namespace rodeo
