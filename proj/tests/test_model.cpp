#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "resgld/errors.hpp"
#include "resgld/model.hpp"
#include "resgld/rng.hpp"
#include "test_util.hpp"

using namespace resgld;

TEST_CASE("dataset mean matches the mixture mean") {
  MixtureSpec spec;
  spec.n_data = 100000;
  spec.gen_seed = 3;
  const Dataset data = make_dataset(spec);
  const double mean = std::accumulate(data.xs.begin(), data.xs.end(), 0.0) /
                      static_cast<double>(data.xs.size());
  // mixture mean 0.5*(-5) + 0.5*25 = 10, pooled sd = sqrt(25 + 15^2)
  const double pooled_sd = std::sqrt(25.0 + 225.0);
  CHECK(std::abs(mean - 10.0) < 3.0 * pooled_sd / std::sqrt(100000.0));
}

TEST_CASE("degenerate noise collapses draws onto the component means") {
  MixtureSpec spec;
  spec.noise_sd = 1e-9;
  spec.n_data = 2000;
  spec.gen_seed = 11;
  const Dataset data = make_dataset(spec);
  for (const double x : data.xs) {
    const bool near_low = std::abs(x - (-5.0)) < 1e-6;
    const bool near_high = std::abs(x - 25.0) < 1e-6;
    CHECK((near_low || near_high));
  }
}

TEST_CASE("dataset generation is bit-identical for a fixed seed") {
  const MixtureSpec spec = test_util::small_spec(5000, 7);
  const Dataset a = make_dataset(spec);
  const Dataset b = make_dataset(spec);
  REQUIRE(a.xs.size() == b.xs.size());
  for (std::size_t i = 0; i < a.xs.size(); ++i) CHECK(a.xs[i] == b.xs[i]);
}

TEST_CASE("spec invariants are enforced") {
  MixtureSpec spec;
  spec.noise_sd = 0.0;
  CHECK_THROWS_AS(spec.validate(), config_error);
  spec = MixtureSpec{};
  spec.prior_var = -1.0;
  CHECK_THROWS_AS(spec.validate(), config_error);
  spec = MixtureSpec{};
  spec.n_data = 0;
  CHECK_THROWS_AS(spec.validate(), config_error);
}

TEST_CASE("likelihood energy is symmetric under theta -> sep - theta") {
  const MixtureSpec spec = test_util::small_spec(64);
  const MixturePosterior model(spec, make_dataset(spec));
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    // dyadic theta so that sep - theta is exact in floating point
    const double theta = -20.0 + static_cast<double>(rng.uniform_below(960)) / 16.0;
    const std::size_t i = static_cast<std::size_t>(rng.uniform_below(64));
    CHECK(model.likelihood_energy(theta, i) == model.likelihood_energy(20.0 - theta, i));
  }
}

TEST_CASE("prior share of the per-datum energy") {
  const MixtureSpec spec = test_util::small_spec(100);
  const MixturePosterior model(spec, make_dataset(spec));
  // theta = 0: prior part vanishes, energy is pure likelihood
  CHECK(model.per_datum_energy(0.0, 3) == model.likelihood_energy(0.0, 3));
}

TEST_CASE("hand-evaluated energy at the symmetric point") {
  // x = 0, theta = 10, sep = 20, sd = 5: both components are N(0; 10, 25), so
  // the likelihood energy is 0.5 log(2 pi 25) + 100/50.
  MixtureSpec spec = test_util::small_spec(1);
  spec.noise_sd = 5.0;
  MixturePosterior model(spec, Dataset{{0.0}});
  const double expected = 0.5 * std::log(2.0 * 3.141592653589793 * 25.0) + 2.0;
  CHECK(model.likelihood_energy(10.0, 0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("likelihood gradient vanishes at the symmetry point") {
  const MixtureSpec spec = test_util::small_spec(128);
  const MixturePosterior model(spec, make_dataset(spec));
  const double prior_part = 10.0 / (spec.prior_var * static_cast<double>(spec.n_data));
  for (std::size_t i = 0; i < 128; i += 17) {
    CHECK(model.per_datum_grad(10.0, i) == prior_part);
  }
}

TEST_CASE("gradient matches central finite differences") {
  const MixtureSpec spec = test_util::small_spec(256);
  const MixturePosterior model(spec, make_dataset(spec));
  Rng rng(99);
  const double h = 1e-5;
  for (int t = 0; t < 100; ++t) {
    const double theta = -15.0 + 50.0 * rng.uniform01();
    const std::size_t i = static_cast<std::size_t>(rng.uniform_below(256));
    const double fd =
        (model.per_datum_energy(theta + h, i) - model.per_datum_energy(theta - h, i)) / (2.0 * h);
    const double g = model.per_datum_grad(theta, i);
    const double scale = std::max({std::abs(fd), std::abs(g), 1e-8});
    CHECK(std::abs(g - fd) / scale < 1e-6);
  }
}

TEST_CASE("prior gradient share, hand value") {
  MixtureSpec spec = test_util::small_spec(5000);
  spec.prior_var = 100.0;
  const MixturePosterior model(spec, make_dataset(spec));
  const double lik_only = model.per_datum_grad(10.0, 0);  // pure prior at theta = 10
  CHECK(lik_only == doctest::Approx(2e-5).epsilon(1e-12));
}

TEST_CASE("sample_batch edge cases") {
  Rng rng(1);
  const MiniBatch full = sample_batch(rng, 4, 4);
  REQUIRE(full.indices.size() == 4);
  for (std::uint32_t i = 0; i < 4; ++i) CHECK(full.indices[i] == i);

  const MiniBatch one = sample_batch(rng, 1, 1);
  REQUIRE(one.indices.size() == 1);
  CHECK(one.indices[0] == 0);

  CHECK_THROWS_AS(sample_batch(rng, 5, 4), config_error);
  CHECK_THROWS_AS(sample_batch(rng, 0, 4), config_error);
}

TEST_CASE("sample_batch is uniform over subsets") {
  Rng rng(42);
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> counts;
  const int draws = 60000;
  for (int t = 0; t < draws; ++t) {
    const MiniBatch b = sample_batch(rng, 2, 4);
    REQUIRE(b.indices.size() == 2);
    REQUIRE(b.indices[0] < b.indices[1]);
    ++counts[{b.indices[0], b.indices[1]}];
  }
  REQUIRE(counts.size() == 6);
  for (const auto& [pair, count] : counts) {
    CHECK(std::abs(count / static_cast<double>(draws) - 1.0 / 6.0) < 0.01);
  }
}

TEST_CASE("full energy equals the per-datum term for N = 1") {
  MixtureSpec spec = test_util::small_spec(1);
  const MixturePosterior model(spec, make_dataset(spec));
  CHECK(model.full_energy(3.5) == model.per_datum_energy(3.5, 0));
}

TEST_CASE("mini-batch estimator is unbiased by enumeration") {
  const MixtureSpec spec = test_util::small_spec(10);
  const MixturePosterior model(spec, make_dataset(spec));
  for (const double theta : {-5.0, 2.5, 25.0}) {
    const double full = model.full_energy(theta);
    double mean = 0.0;
    int count = 0;
    test_util::for_each_combination(10, 3, [&](const std::vector<std::uint32_t>& idx) {
      MiniBatch b;
      b.indices = idx;
      mean += batch_energy(model, theta, b);
      ++count;
    });
    mean /= count;
    CHECK(std::abs(mean - full) < 1e-10 * std::max(1.0, std::abs(full)));
  }
}

TEST_CASE("unbiasedness holds for every batch size up to N") {
  const MixtureSpec spec = test_util::small_spec(8);
  const MixturePosterior model(spec, make_dataset(spec));
  const double full = model.full_energy(-1.0);
  for (std::size_t n = 1; n <= 8; ++n) {
    double mean = 0.0;
    int count = 0;
    test_util::for_each_combination(8, n, [&](const std::vector<std::uint32_t>& idx) {
      MiniBatch b;
      b.indices = idx;
      mean += batch_energy(model, -1.0, b);
      ++count;
    });
    mean /= count;
    CHECK(std::abs(mean - full) < 1e-10 * std::abs(full));
  }
}

TEST_CASE("full likelihood energy is exactly symmetric across the modes") {
  const MixtureSpec spec = test_util::small_spec(1000);
  const MixturePosterior model(spec, make_dataset(spec));
  double lik_low = 0.0, lik_high = 0.0;
  for (std::size_t i = 0; i < 1000; ++i) {
    lik_low += model.likelihood_energy(-5.0, i);
    lik_high += model.likelihood_energy(25.0, i);
  }
  CHECK(lik_low == lik_high);
  // the prior shares differ: 25/200 vs 625/200 per unit of prior_var weight
  const double prior_low = 25.0 / (2.0 * spec.prior_var);
  const double prior_high = 625.0 / (2.0 * spec.prior_var);
  CHECK(model.full_energy(-5.0) - model.full_energy(25.0) ==
        doctest::Approx(prior_low - prior_high).epsilon(1e-9));
}

TEST_CASE("dataset binary round trip") {
  const MixtureSpec spec = test_util::small_spec(137);
  const Dataset data = make_dataset(spec);
  const std::string path = "model_roundtrip.bin";
  save_dataset(data, path);
  const Dataset back = load_dataset(path);
  REQUIRE(back.xs.size() == data.xs.size());
  for (std::size_t i = 0; i < data.xs.size(); ++i) CHECK(back.xs[i] == data.xs[i]);
  std::remove(path.c_str());
}
