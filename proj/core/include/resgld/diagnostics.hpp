#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "resgld/model.hpp"

namespace resgld {

/// Quadrature posterior on a grid: normalized log-density plus cumulative
/// distribution, both by the trapezoid rule.
struct ReferencePosterior {
  std::vector<double> grid;         // strictly ascending
  std::vector<double> log_density;  // normalized
  std::vector<double> cdf;          // non-decreasing, cdf.back() == 1

  double quantile(double p) const;  // inverse CDF by linear interpolation
  double mean() const;              // trapezoid first moment
  double mass_between(double lo, double hi) const;
};

/// Thinned low-temperature chain output.
struct SampleSet {
  std::vector<double> values;
  long burn_in = 0;
  long thinning = 1;
};

/// Quadrature posterior for `model` on [grid_lo, grid_hi] with grid_n points.
/// Throws config_error when the grid visibly truncates the posterior mass
/// (boundary density above 1e-6 of the peak).
ReferencePosterior build_reference(const EnergyModel& model, double grid_lo, double grid_hi,
                                   std::size_t grid_n);

/// Exact 1-D 2-Wasserstein distance between the empirical measure of the
/// samples and the reference, via the quantile coupling.
double w2_empirical_vs_reference(const SampleSet& samples, const ReferencePosterior& ref);

/// Exact W2 between two empirical measures (step-CDF quantile coupling;
/// handles unequal sample counts).
double w2_empirical(const SampleSet& a, const SampleSet& b);

/// Fraction of samples whose nearest center lies within `radius` (ties go to
/// the smaller center). Fractions sum to at most 1.
std::vector<double> mode_occupancy(const SampleSet& samples, std::span<const double> centers,
                                   double radius);

struct Histogram {
  std::vector<std::uint64_t> counts;  // bins [lo + k w, lo + (k+1) w)
  std::uint64_t underflow = 0;        // x < lo
  std::uint64_t overflow = 0;         // x >= hi
};

Histogram histogram(std::span<const double> xs, double lo, double hi, std::size_t bins);

}  // namespace resgld
