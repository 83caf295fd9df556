#include <rodeo/errors.hpp>
#include <rodeo/kernel.hpp>

#include <cmath>
#include <string>

namespace rodeo {

namespace {
const double sqrt5 = std::sqrt(5.0);
}

KernelSpec KernelSpec::gaussian()
{
  return { KernelFamily::gaussian, std::numeric_limits<double>::infinity(), 1.0, 1.0 };
}

KernelSpec KernelSpec::epanechnikov()
{
  return { KernelFamily::epanechnikov, sqrt5, 1.0, 1.0 };
}

KernelSpec kernel_from_name(std::string_view name)
{
  if (name == "gaussian")
    return KernelSpec::gaussian();
  if (name == "epanechnikov")
    return KernelSpec::epanechnikov();
  throw ConfigError("unknown kernel '" + std::string(name) + "'");
}

std::string_view kernel_name(KernelFamily family)
{
  switch (family) {
    case KernelFamily::gaussian:
      return "gaussian";
    case KernelFamily::epanechnikov:
      return "epanechnikov";
  }
  return "unknown";
}

double kernel_value(const KernelSpec& kernel, double u)
{
  switch (kernel.family) {
    case KernelFamily::gaussian:
      return kernel.scale * std::exp(-0.5 * u * u);
    case KernelFamily::epanechnikov:
      return std::abs(u) <= sqrt5 ? kernel.scale * (5.0 - u * u) : 0.0;
  }
  return 0.0;
}

double log_kernel_dh(const KernelSpec& kernel, double offset, double h)
{
  const double off2 = offset * offset;
  const double h3 = h * h * h;
  switch (kernel.family) {
    case KernelFamily::gaussian:
      return off2 / h3;
    case KernelFamily::epanechnikov: {
      // strict: at |offset| = sqrt(5) h the weight is zero and the ratio blows up
      if (std::abs(offset) >= sqrt5 * h)
        return 0.0;
      return (2.0 * off2 / h3) / (5.0 - off2 / (h * h));
    }
  }
  return 0.0;
}

} // namespace rodeo
