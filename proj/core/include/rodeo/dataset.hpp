#pragma once

#include <Eigen/Dense>
#include <cstddef>

namespace rodeo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

//! Regression sample: n observations of d covariates plus a response.
//!
//! Immutable after construction; all entries are checked to be finite.
class Dataset
{
public:
  Dataset(Matrix X, Vector Y);

  std::size_t n() const { return static_cast<std::size_t>(X_.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(X_.cols()); }

  const Matrix& X() const { return X_; }
  const Vector& Y() const { return Y_; }

  //! Same covariates, different response.
  Dataset with_response(Vector Y) const;

private:
  Matrix X_;
  Vector Y_;
};

} // namespace rodeo
