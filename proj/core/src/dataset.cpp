#include <rodeo/dataset.hpp>
#include <rodeo/errors.hpp>

#include <string>

namespace rodeo {

Dataset::Dataset(Matrix X, Vector Y)
  : X_(std::move(X))
  , Y_(std::move(Y))
{
  if (X_.rows() < 2)
    throw ConfigError("dataset needs at least 2 observations, got " +
                      std::to_string(X_.rows()));
  if (X_.cols() < 1)
    throw ConfigError("dataset needs at least 1 covariate");
  if (X_.rows() != Y_.size())
    throw ConfigError("X has " + std::to_string(X_.rows()) + " rows but Y has " +
                      std::to_string(Y_.size()) + " entries");
  if (!X_.allFinite() || !Y_.allFinite())
    throw ConfigError("dataset contains non-finite values");
}

Dataset Dataset::with_response(Vector Y) const
{
  return Dataset(X_, std::move(Y));
}

} // namespace rodeo
