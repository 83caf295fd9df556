#pragma once

#include <rodeo/dataset.hpp>

#include <cstddef>
#include <vector>

namespace rodeo {

//! One pair of observations (0-based, i < l) and their covariate distance.
struct NearPair
{
  std::size_t i = 0;
  std::size_t l = 0;
  double distance = 0.0;
};

//! The J closest pairs of covariate vectors, ascending by distance; ties
//! are broken lexicographically on (i, l).
struct PairSet
{
  std::vector<NearPair> pairs;

  std::size_t J() const { return pairs.size(); }
  //! Largest distance among the selected pairs.
  double max_distance() const { return pairs.empty() ? 0.0 : pairs.back().distance; }
};

//! Exact J nearest pairs under Euclidean distance. O(n^2 d log J) time and
//! O(J) memory. Throws ConfigError unless 1 <= J <= n(n-1)/2.
PairSet nearest_pairs(const Dataset& data, std::size_t J);

//! Default pair count: min(floor(n/10), 50), clamped to at least 5 and to
//! the number of available pairs.
std::size_t default_pair_count(std::size_t n);

//! sqrt of (1/2J) sum over the J nearest pairs of (Y_i - Y_l)^2.
double sigma_rice(const Dataset& data, std::size_t J);

enum class MedianVariant
{
  //! (sqrt(pi)/2) * mean |Y_i - Y_l|; the constant matches E|N(0, 2 sigma^2)|.
  mean_based,
  //! median |Y_i - Y_l| / (sqrt(2) q75), consistent for sigma under normal noise.
  median_consistent,
  //! sqrt((sqrt(pi)/2) * median |Y_i - Y_l|): the median formula read
  //! literally, as an estimate of sigma^2. It is not dimensionally a variance
  //! and is kept only for comparison.
  paper_literal
};

double sigma_median(const Dataset& data, std::size_t J, MedianVariant variant);

} // namespace rodeo
