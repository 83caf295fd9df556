#include <rodeo/errors.hpp>
#include <rodeo/noise.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <tuple>

namespace rodeo {

namespace {

// Upper quartile of the standard normal.
constexpr double normal_q75 = 0.6744897501960817;

bool pair_less(const NearPair& a, const NearPair& b)
{
  return std::tie(a.distance, a.i, a.l) < std::tie(b.distance, b.i, b.l);
}

std::vector<double> absolute_differences(const Dataset& data, const PairSet& set)
{
  std::vector<double> diffs;
  diffs.reserve(set.J());
  for (const auto& p : set.pairs)
    diffs.push_back(std::abs(data.Y()[static_cast<Eigen::Index>(p.i)] -
                             data.Y()[static_cast<Eigen::Index>(p.l)]));
  return diffs;
}

double median_of(std::vector<double> values)
{
  std::sort(values.begin(), values.end());
  const auto m = values.size();
  return m % 2 == 1 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

} // namespace

PairSet nearest_pairs(const Dataset& data, std::size_t J)
{
  const std::size_t n = data.n();
  const std::size_t total = n * (n - 1) / 2;
  if (J < 1 || J > total)
    throw ConfigError("pair count J=" + std::to_string(J) + " outside [1, " +
                      std::to_string(total) + "]");

  // max-heap on (distance, i, l) holding the J best pairs seen so far
  std::priority_queue<NearPair, std::vector<NearPair>, decltype(&pair_less)> heap(pair_less);
  const auto& X = data.X();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t l = i + 1; l < n; ++l) {
      NearPair cand{ i, l, (X.row(static_cast<Eigen::Index>(i)) - X.row(static_cast<Eigen::Index>(l))).norm() };
      if (heap.size() < J) {
        heap.push(cand);
      } else if (pair_less(cand, heap.top())) {
        heap.pop();
        heap.push(cand);
      }
    }
  }

  PairSet out;
  out.pairs.reserve(J);
  while (!heap.empty()) {
    out.pairs.push_back(heap.top());
    heap.pop();
  }
  std::reverse(out.pairs.begin(), out.pairs.end());
  return out;
}

std::size_t default_pair_count(std::size_t n)
{
  const std::size_t total = n * (n - 1) / 2;
  const std::size_t J = std::max<std::size_t>(std::min<std::size_t>(n / 10, 50), 5);
  return std::min(J, total);
}

double sigma_rice(const Dataset& data, std::size_t J)
{
  const PairSet set = nearest_pairs(data, J);
  double sum = 0.0;
  for (double diff : absolute_differences(data, set))
    sum += diff * diff;
  return std::sqrt(sum / (2.0 * static_cast<double>(set.J())));
}

double sigma_median(const Dataset& data, std::size_t J, MedianVariant variant)
{
  const PairSet set = nearest_pairs(data, J);
  auto diffs = absolute_differences(data, set);
  const double half_sqrt_pi = 0.5 * std::sqrt(std::numbers::pi);
  switch (variant) {
    case MedianVariant::mean_based: {
      double sum = 0.0;
      for (double diff : diffs)
        sum += diff;
      return half_sqrt_pi * sum / static_cast<double>(diffs.size());
    }
    case MedianVariant::median_consistent:
      return median_of(std::move(diffs)) / (std::numbers::sqrt2 * normal_q75);
    case MedianVariant::paper_literal:
      return std::sqrt(half_sqrt_pi * median_of(std::move(diffs)));
  }
  return 0.0;
}

} // namespace rodeo
