#pragma once

#include <limits>
#include <string_view>

namespace rodeo {

enum class KernelFamily
{
  gaussian,
  epanechnikov
};

//! Univariate kernel used as a factor of the product kernel.
//!
//! Values are unnormalized: Gaussian is exp(-u^2/2) and Epanechnikov is
//! (5 - u^2) on |u| <= sqrt(5). The normalizing constant cancels in every
//! local fit. `nu2` is the second moment of the *normalized* kernel (1 for
//! both families). `scale` multiplies every kernel value; fits are invariant
//! to it and it exists so that invariance can be exercised.
struct KernelSpec
{
  KernelFamily family = KernelFamily::gaussian;
  double support_radius = std::numeric_limits<double>::infinity();
  double nu2 = 1.0;
  double scale = 1.0;

  static KernelSpec gaussian();
  static KernelSpec epanechnikov();
};

//! Throws ConfigError for anything other than "gaussian" or "epanechnikov".
KernelSpec kernel_from_name(std::string_view name);
std::string_view kernel_name(KernelFamily family);

double kernel_value(const KernelSpec& kernel, double u);

//! d/dh log K(offset / h), the diagonal entry of L_j for one observation.
//! Zero wherever the kernel itself vanishes.
double log_kernel_dh(const KernelSpec& kernel, double offset, double h);

} // namespace rodeo
