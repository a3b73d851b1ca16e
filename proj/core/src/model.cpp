#include "resgld/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "resgld/errors.hpp"
#include "resgld/numerics.hpp"

namespace resgld {

void MixtureSpec::validate() const {
  if (!(noise_sd > 0.0)) throw config_error("noise_sd must be > 0");
  if (!(prior_var > 0.0)) throw config_error("prior_var must be > 0");
  if (n_data < 1) throw config_error("n_data must be >= 1");
}

double EnergyModel::full_energy(double theta) const {
  return pairwise_sum(0, data_size(), [&](std::size_t i) { return per_datum_energy(theta, i); });
}

double EnergyModel::batch_energy_sum(double theta, std::span<const std::uint32_t> idx) const {
  return pairwise_sum(0, idx.size(),
                      [&](std::size_t j) { return per_datum_energy(theta, idx[j]); });
}

double EnergyModel::batch_grad_sum(double theta, std::span<const std::uint32_t> idx) const {
  return pairwise_sum(0, idx.size(), [&](std::size_t j) { return per_datum_grad(theta, idx[j]); });
}

double batch_energy(const EnergyModel& model, double theta, const MiniBatch& batch) {
  const double scale = static_cast<double>(model.data_size()) / static_cast<double>(batch.size());
  return scale * model.batch_energy_sum(theta, batch.indices);
}

double batch_grad(const EnergyModel& model, double theta, const MiniBatch& batch) {
  const double scale = static_cast<double>(model.data_size()) / static_cast<double>(batch.size());
  return scale * model.batch_grad_sum(theta, batch.indices);
}

MixturePosterior::MixturePosterior(MixtureSpec spec, Dataset data)
    : spec_(spec), data_(std::move(data)) {
  spec_.validate();
  if (data_.xs.size() != spec_.n_data)
    throw config_error("dataset size does not match spec.n_data");
  const double s2 = spec_.noise_sd * spec_.noise_sd;
  log_norm_ = -0.5 * std::log(2.0 * 3.141592653589793 * s2);
  inv_2s2_ = 1.0 / (2.0 * s2);
  inv_s2_ = 1.0 / s2;
  const double n = static_cast<double>(spec_.n_data);
  prior_coef_ = 1.0 / (2.0 * spec_.prior_var * n);
  prior_gcoef_ = 1.0 / (spec_.prior_var * n);
}

double MixturePosterior::likelihood_energy(double theta, std::size_t i) const {
  const double x = data_.xs[i];
  const double d1 = x - theta;
  const double d2 = x - (spec_.sep - theta);
  const double a1 = log_norm_ - d1 * d1 * inv_2s2_;
  const double a2 = log_norm_ - d2 * d2 * inv_2s2_;
  // -log(0.5 e^a1 + 0.5 e^a2)
  return 0.6931471805599453 - logaddexp(a1, a2);
}

double MixturePosterior::per_datum_energy(double theta, std::size_t i) const {
  return likelihood_energy(theta, i) + theta * theta * prior_coef_;
}

double MixturePosterior::per_datum_grad(double theta, std::size_t i) const {
  const double x = data_.xs[i];
  const double d1 = x - theta;
  const double d2 = x - (spec_.sep - theta);
  const double a1 = -d1 * d1 * inv_2s2_;
  const double a2 = -d2 * d2 * inv_2s2_;
  // responsibility of component 1
  const double r1 = 1.0 / (1.0 + std::exp(a2 - a1));
  const double lik = (r1 * (theta - x) + (1.0 - r1) * (x - (spec_.sep - theta))) * inv_s2_;
  return lik + theta * prior_gcoef_;
}

double MixturePosterior::full_energy(double theta) const {
  return pairwise_sum(0, data_.xs.size(),
                      [&](std::size_t i) { return per_datum_energy(theta, i); });
}

double MixturePosterior::batch_energy_sum(double theta,
                                          std::span<const std::uint32_t> idx) const {
  return pairwise_sum(0, idx.size(),
                      [&](std::size_t j) { return per_datum_energy(theta, idx[j]); });
}

double MixturePosterior::batch_grad_sum(double theta, std::span<const std::uint32_t> idx) const {
  return pairwise_sum(0, idx.size(), [&](std::size_t j) { return per_datum_grad(theta, idx[j]); });
}

Dataset make_dataset(const MixtureSpec& spec) {
  spec.validate();
  std::uint64_t s = spec.gen_seed ^ 0x8e2f4bd61c09a735ULL;
  Rng rng(splitmix64(s));
  Dataset data;
  data.xs.resize(spec.n_data);
  for (std::size_t i = 0; i < spec.n_data; ++i) {
    const bool first = rng.uniform01() < 0.5;
    const double mu = first ? spec.gen_theta : spec.sep - spec.gen_theta;
    data.xs[i] = mu + spec.noise_sd * rng.normal();
  }
  return data;
}

MiniBatch sample_batch(Rng& rng, std::size_t n, std::size_t data_size) {
  if (n < 1 || n > data_size) throw config_error("batch size must satisfy 1 <= n <= N");
  MiniBatch batch;
  batch.indices.reserve(n);
  if (n == data_size) {
    for (std::size_t i = 0; i < n; ++i) batch.indices.push_back(static_cast<std::uint32_t>(i));
    return batch;
  }
  // Floyd's algorithm: uniform over all n-subsets.
  std::unordered_set<std::uint32_t> chosen;
  chosen.reserve(n * 2);
  for (std::size_t j = data_size - n; j < data_size; ++j) {
    const auto t = static_cast<std::uint32_t>(rng.uniform_below(j + 1));
    if (!chosen.insert(t).second) chosen.insert(static_cast<std::uint32_t>(j));
  }
  batch.indices.assign(chosen.begin(), chosen.end());
  std::sort(batch.indices.begin(), batch.indices.end());
  return batch;
}

void save_dataset(const Dataset& data, const std::string& path) {
  static_assert(std::endian::native == std::endian::little, "little-endian format");
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw io_error("cannot open for writing: " + path);
  const std::uint64_t count = data.xs.size();
  bool ok = std::fwrite(&count, sizeof count, 1, f) == 1;
  ok = ok && std::fwrite(data.xs.data(), sizeof(double), data.xs.size(), f) == data.xs.size();
  ok = std::fclose(f) == 0 && ok;
  if (!ok) throw io_error("short write: " + path);
}

Dataset load_dataset(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw io_error("cannot open for reading: " + path);
  std::uint64_t count = 0;
  if (std::fread(&count, sizeof count, 1, f) != 1) {
    std::fclose(f);
    throw io_error("truncated dataset file: " + path);
  }
  Dataset data;
  data.xs.resize(count);
  const bool ok = std::fread(data.xs.data(), sizeof(double), count, f) == count;
  std::fclose(f);
  if (!ok) throw io_error("truncated dataset file: " + path);
  return data;
}

}  // namespace resgld
