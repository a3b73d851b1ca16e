#pragma once

#include <cmath>
#include <cstddef>

namespace resgld {

/// log(exp(a) + exp(b)) without overflow.
inline double logaddexp(double a, double b) {
  if (a == b) return a + 0.6931471805599453;  // log 2
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

/// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z * 0.7071067811865476); }

/// Sums f(lo..hi-1) over a fixed binary reduction tree. The tree depends only
/// on the index range, so the result is independent of how callers might shard
/// the work, and rounding error stays O(log n).
template <typename F>
double pairwise_sum(std::size_t lo, std::size_t hi, F&& f) {
  const std::size_t n = hi - lo;
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    return s;
  }
  const std::size_t mid = lo + n / 2;
  return pairwise_sum(lo, mid, f) + pairwise_sum(mid, hi, f);
}

}  // namespace resgld
