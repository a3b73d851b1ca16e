#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "resgld/rng.hpp"

namespace resgld {

/// Parameters of the bimodal Gaussian-mixture posterior benchmark:
/// x_i | theta ~ 0.5 N(theta, noise_sd^2) + 0.5 N(sep - theta, noise_sd^2),
/// theta ~ N(0, prior_var).
struct MixtureSpec {
  double sep = 20.0;
  double noise_sd = 5.0;
  double prior_var = 100.0;
  std::size_t n_data = 5000;
  double gen_theta = -5.0;
  std::uint64_t gen_seed = 42;

  void validate() const;  // throws config_error
};

struct Dataset {
  std::vector<double> xs;
};

/// Distinct sorted indices into the dataset.
struct MiniBatch {
  std::vector<std::uint32_t> indices;
  std::size_t size() const { return indices.size(); }
};

/// Scalar-parameter model exposing per-datum energy terms. The posterior
/// energy is sum_i per_datum_energy(theta, i); each term folds 1/N of the
/// negative log-prior so every subsampled estimator below stays unbiased for
/// the full posterior energy.
class EnergyModel {
public:
  virtual ~EnergyModel() = default;

  virtual std::size_t data_size() const = 0;
  virtual double per_datum_energy(double theta, std::size_t i) const = 0;
  virtual double per_datum_grad(double theta, std::size_t i) const = 0;

  /// Full-data energy, summed over a fixed pairwise reduction tree.
  virtual double full_energy(double theta) const;

  /// Plain sums over a batch (no N/n rescaling); same fixed-tree summation.
  virtual double batch_energy_sum(double theta, std::span<const std::uint32_t> idx) const;
  virtual double batch_grad_sum(double theta, std::span<const std::uint32_t> idx) const;
};

/// Unbiased mini-batch estimators: (N/n) * sum_{i in B} term_i(theta).
double batch_energy(const EnergyModel& model, double theta, const MiniBatch& batch);
double batch_grad(const EnergyModel& model, double theta, const MiniBatch& batch);

/// The built-in mixture posterior.
class MixturePosterior final : public EnergyModel {
public:
  MixturePosterior(MixtureSpec spec, Dataset data);

  std::size_t data_size() const override { return data_.xs.size(); }
  double per_datum_energy(double theta, std::size_t i) const override;
  double per_datum_grad(double theta, std::size_t i) const override;
  double full_energy(double theta) const override;
  double batch_energy_sum(double theta, std::span<const std::uint32_t> idx) const override;
  double batch_grad_sum(double theta, std::span<const std::uint32_t> idx) const override;

  /// Mixture negative log-likelihood of one datum (no prior share); invariant
  /// under theta -> sep - theta.
  double likelihood_energy(double theta, std::size_t i) const;

  const MixtureSpec& spec() const { return spec_; }
  const Dataset& data() const { return data_; }

private:
  MixtureSpec spec_;
  Dataset data_;
  double log_norm_;     // -0.5 log(2 pi sd^2)
  double inv_2s2_;
  double inv_s2_;
  double prior_coef_;   // 1 / (2 prior_var N)
  double prior_gcoef_;  // 1 / (prior_var N)
};

/// Draws the dataset for `spec`; deterministic in spec.gen_seed.
Dataset make_dataset(const MixtureSpec& spec);

/// Uniform without-replacement sample of n indices from [0, N); sorted.
/// n == N returns the identity batch without consuming randomness.
MiniBatch sample_batch(Rng& rng, std::size_t n, std::size_t data_size);

/// Binary dataset round trip: 8-byte little-endian count, then 64-bit floats.
/// Regeneration from the seed is the canonical path; this is an export format.
void save_dataset(const Dataset& data, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace resgld
