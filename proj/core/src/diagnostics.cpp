#include "resgld/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "resgld/errors.hpp"

namespace resgld {

double ReferencePosterior::quantile(double p) const {
  if (p <= 0.0) return grid.front();
  if (p >= 1.0) return grid.back();
  const auto it = std::lower_bound(cdf.begin(), cdf.end(), p);
  const std::size_t i = static_cast<std::size_t>(it - cdf.begin());
  if (i == 0) return grid.front();
  const double c0 = cdf[i - 1], c1 = cdf[i];
  const double t = c1 > c0 ? (p - c0) / (c1 - c0) : 1.0;
  return grid[i - 1] + t * (grid[i] - grid[i - 1]);
}

double ReferencePosterior::mean() const {
  double num = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double w0 = std::exp(log_density[i]), w1 = std::exp(log_density[i + 1]);
    num += 0.5 * (grid[i] * w0 + grid[i + 1] * w1) * (grid[i + 1] - grid[i]);
  }
  return num;  // density already normalized
}

double ReferencePosterior::mass_between(double lo, double hi) const {
  auto cdf_at = [this](double x) {
    if (x <= grid.front()) return 0.0;
    if (x >= grid.back()) return 1.0;
    const auto it = std::upper_bound(grid.begin(), grid.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - grid.begin());
    const double t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
    return cdf[i - 1] + t * (cdf[i] - cdf[i - 1]);
  };
  return cdf_at(hi) - cdf_at(lo);
}

ReferencePosterior build_reference(const EnergyModel& model, double grid_lo, double grid_hi,
                                   std::size_t grid_n) {
  if (!(grid_lo < grid_hi)) throw config_error("reference grid needs grid_lo < grid_hi");
  if (grid_n < 100) throw config_error("reference grid needs at least 100 points");

  ReferencePosterior ref;
  ref.grid.resize(grid_n);
  ref.log_density.resize(grid_n);
  const double dx = (grid_hi - grid_lo) / static_cast<double>(grid_n - 1);
  for (std::size_t i = 0; i < grid_n; ++i) {
    ref.grid[i] = grid_lo + dx * static_cast<double>(i);
    ref.log_density[i] = -model.full_energy(ref.grid[i]);
  }
  const double peak = *std::max_element(ref.log_density.begin(), ref.log_density.end());

  std::vector<double> w(grid_n);
  for (std::size_t i = 0; i < grid_n; ++i) w[i] = std::exp(ref.log_density[i] - peak);
  if (w.front() > 1e-6 || w.back() > 1e-6)
    throw config_error("reference grid too narrow: density at the boundary is not negligible");

  ref.cdf.resize(grid_n);
  ref.cdf[0] = 0.0;
  double acc = 0.0;
  for (std::size_t i = 1; i < grid_n; ++i) {
    acc += 0.5 * (w[i - 1] + w[i]) * dx;
    ref.cdf[i] = acc;
  }
  const double total = acc;
  for (std::size_t i = 0; i < grid_n; ++i) {
    ref.cdf[i] /= total;
    ref.log_density[i] -= peak + std::log(total);
  }
  return ref;
}

double w2_empirical_vs_reference(const SampleSet& samples, const ReferencePosterior& ref) {
  if (samples.values.empty()) throw config_error("empty sample set");
  std::vector<double> sorted = samples.values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double d = sorted[i] - ref.quantile(p);
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(n));
}

double w2_empirical(const SampleSet& a, const SampleSet& b) {
  if (a.values.empty() || b.values.empty()) throw config_error("empty sample set");
  std::vector<double> xa = a.values, xb = b.values;
  std::sort(xa.begin(), xa.end());
  std::sort(xb.begin(), xb.end());
  const double na = static_cast<double>(xa.size()), nb = static_cast<double>(xb.size());
  std::size_t ia = 0, ib = 0;
  double p = 0.0, acc = 0.0;
  while (ia < xa.size() && ib < xb.size()) {
    const double pa = static_cast<double>(ia + 1) / na;
    const double pb = static_cast<double>(ib + 1) / nb;
    const double pn = std::min(pa, pb);
    const double d = xa[ia] - xb[ib];
    acc += d * d * (pn - p);
    p = pn;
    if (pa <= pn) ++ia;
    if (pb <= pn) ++ib;
  }
  return std::sqrt(acc);
}

std::vector<double> mode_occupancy(const SampleSet& samples, std::span<const double> centers,
                                   double radius) {
  if (!(radius > 0.0)) throw config_error("occupancy radius must be > 0");
  std::vector<double> fractions(centers.size(), 0.0);
  if (samples.values.empty() || centers.empty()) return fractions;
  for (const double x : samples.values) {
    std::size_t best = 0;
    double best_d = std::abs(x - centers[0]);
    for (std::size_t c = 1; c < centers.size(); ++c) {
      const double d = std::abs(x - centers[c]);
      if (d < best_d || (d == best_d && centers[c] < centers[best])) {
        best = c;
        best_d = d;
      }
    }
    if (best_d <= radius) fractions[best] += 1.0;
  }
  for (double& f : fractions) f /= static_cast<double>(samples.values.size());
  return fractions;
}

Histogram histogram(std::span<const double> xs, double lo, double hi, std::size_t bins) {
  if (bins < 1) throw config_error("histogram needs at least one bin");
  if (!(lo < hi)) throw config_error("histogram needs lo < hi");
  Histogram h;
  h.counts.assign(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (const double x : xs) {
    if (x < lo) {
      ++h.underflow;
    } else if (x >= hi) {
      ++h.overflow;
    } else {
      auto idx = static_cast<std::size_t>((x - lo) / width);
      if (idx >= bins) idx = bins - 1;  // guard the floating boundary
      ++h.counts[idx];
    }
  }
  return h;
}

}  // namespace resgld
