#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "resgld/diagnostics.hpp"
#include "resgld/errors.hpp"
#include "resgld/model.hpp"
#include "resgld/rng.hpp"
#include "test_util.hpp"

using namespace resgld;

namespace {

SampleSet make_set(std::vector<double> values) {
  SampleSet s;
  s.values = std::move(values);
  return s;
}

}  // namespace

TEST_CASE("reference posterior approaches the prior for one weak datum") {
  MixtureSpec spec;
  spec.n_data = 1;
  spec.noise_sd = 2000.0;  // likelihood nearly flat
  MixturePosterior model(spec, Dataset{{10.0}});
  const ReferencePosterior ref = build_reference(model, -60.0, 60.0, 1200);
  CHECK(std::abs(ref.mean() - 0.0) < 0.5);
}

TEST_CASE("reference density is symmetric when the prior is nearly flat") {
  MixtureSpec spec = test_util::small_spec(200);
  spec.prior_var = 1e12;
  const MixturePosterior model(spec, make_dataset(spec));
  const ReferencePosterior ref = build_reference(model, -40.0, 60.0, 2001);
  // grid is symmetric around 10, so theta and 20 - theta are both nodes
  const std::size_t n = ref.grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = ref.log_density[i];
    const double b = ref.log_density[n - 1 - i];
    if (a < -40.0) continue;  // only compare where there is mass
    CHECK(std::abs(a - b) < 1e-6 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("reference cdf is a normalized trapezoid integral") {
  const MixtureSpec spec = test_util::small_spec(500);
  const MixturePosterior model(spec, make_dataset(spec));
  const ReferencePosterior ref = build_reference(model, -30.0, 50.0, 800);
  CHECK(ref.cdf.front() == 0.0);
  CHECK(ref.cdf.back() == 1.0);
  double total = 0.0;
  for (std::size_t i = 1; i < ref.grid.size(); ++i) {
    CHECK(ref.cdf[i] >= ref.cdf[i - 1]);
    const double cell = 0.5 *
                        (std::exp(ref.log_density[i - 1]) + std::exp(ref.log_density[i])) *
                        (ref.grid[i] - ref.grid[i - 1]);
    CHECK(std::abs((ref.cdf[i] - ref.cdf[i - 1]) - cell) < 1e-10);
    total += cell;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("too narrow a reference grid is rejected") {
  const MixtureSpec spec = test_util::small_spec(500);
  const MixturePosterior model(spec, make_dataset(spec));
  CHECK_THROWS_AS(build_reference(model, -5.2, -4.8, 200), config_error);
  CHECK_THROWS_AS(build_reference(model, -30.0, 50.0, 50), config_error);
  CHECK_THROWS_AS(build_reference(model, 50.0, -30.0, 500), config_error);
}

TEST_CASE("self-samples from the reference have near-zero distance") {
  const MixtureSpec spec = test_util::small_spec(500);
  const MixturePosterior model(spec, make_dataset(spec));
  const ReferencePosterior ref = build_reference(model, -30.0, 50.0, 4000);
  SampleSet s;
  const int n = 100000;
  s.values.reserve(n);
  for (int i = 0; i < n; ++i)
    s.values.push_back(ref.quantile((static_cast<double>(i) + 0.5) / n));
  CHECK(w2_empirical_vs_reference(s, ref) < 0.05);
}

TEST_CASE("distance to a point mass is the translation distance") {
  ReferencePosterior point;
  point.grid = {3.0, 3.0 + 1e-12};
  point.log_density = {0.0, 0.0};
  point.cdf = {0.0, 1.0};
  const SampleSet zeros = make_set({0.0, 0.0, 0.0, 0.0});
  CHECK(w2_empirical_vs_reference(zeros, point) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("empty sample sets are rejected") {
  ReferencePosterior point;
  point.grid = {0.0, 1.0};
  point.log_density = {0.0, 0.0};
  point.cdf = {0.0, 1.0};
  CHECK_THROWS_AS(w2_empirical_vs_reference(SampleSet{}, point), config_error);
  CHECK_THROWS_AS(w2_empirical(SampleSet{}, make_set({1.0})), config_error);
}

TEST_CASE("sample-vs-sample distance on a hand case") {
  CHECK(w2_empirical(make_set({0.0, 2.0}), make_set({1.0, 3.0})) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sample-vs-sample distance is a metric") {
  Rng rng(6);
  auto random_set = [&](int n, double shift) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = shift + 3.0 * rng.normal();
    return make_set(std::move(v));
  };
  for (int t = 0; t < 20; ++t) {
    const SampleSet a = random_set(40 + t, -1.0);
    const SampleSet b = random_set(55, 0.5);
    const SampleSet c = random_set(37 + t, 2.0);
    const double ab = w2_empirical(a, b);
    const double ba = w2_empirical(b, a);
    const double ac = w2_empirical(a, c);
    const double bc = w2_empirical(b, c);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    CHECK(ac <= ab + bc + 1e-12);
    CHECK(w2_empirical(a, a) == 0.0);
  }
}

TEST_CASE("mode occupancy hand cases") {
  const std::vector<double> centers{-5.0, 25.0};
  const auto all_low = mode_occupancy(make_set({-5.0, -5.0, -5.0}), centers, 3.0);
  CHECK(all_low[0] == 1.0);
  CHECK(all_low[1] == 0.0);

  const auto split = mode_occupancy(make_set({-5.0, 25.0}), centers, 3.0);
  CHECK(split[0] == 0.5);
  CHECK(split[1] == 0.5);

  const auto none = mode_occupancy(make_set({10.0}), centers, 3.0);
  CHECK(none[0] == 0.0);
  CHECK(none[1] == 0.0);
  CHECK_THROWS_AS(mode_occupancy(make_set({0.0}), centers, 0.0), config_error);
}

TEST_CASE("mode occupancy fractions sum to at most one even for overlapping balls") {
  const std::vector<double> centers{0.0, 1.0};
  const auto f = mode_occupancy(make_set({0.4, 0.6, 0.5, 2.0}), centers, 5.0);
  CHECK(f[0] + f[1] <= 1.0);
}

TEST_CASE("mode occupancy matches the quadrature masses") {
  const MixtureSpec spec = test_util::small_spec(500);
  const MixturePosterior model(spec, make_dataset(spec));
  const ReferencePosterior ref = build_reference(model, -30.0, 50.0, 4000);
  SampleSet s;
  const int n = 10000;
  for (int i = 0; i < n; ++i)
    s.values.push_back(ref.quantile((static_cast<double>(i) + 0.5) / n));
  const std::vector<double> centers{-5.0, 25.0};
  const auto f = mode_occupancy(s, centers, 3.0);
  CHECK(std::abs(f[0] - ref.mass_between(-8.0, -2.0)) < 0.05);
  CHECK(std::abs(f[1] - ref.mass_between(22.0, 28.0)) < 0.05);
}

TEST_CASE("mode occupancy is equivariant under center permutation") {
  Rng rng(3);
  std::vector<double> values(500);
  for (double& v : values) v = -10.0 + 40.0 * rng.uniform01();
  const SampleSet s = make_set(std::move(values));
  const std::vector<double> ab{-5.0, 25.0}, ba{25.0, -5.0};
  const auto f_ab = mode_occupancy(s, ab, 4.0);
  const auto f_ba = mode_occupancy(s, ba, 4.0);
  CHECK(f_ab[0] == f_ba[1]);
  CHECK(f_ab[1] == f_ba[0]);
}

TEST_CASE("histogram basics") {
  const Histogram one = histogram(std::vector<double>{-2.0}, -2.0, 2.0, 4);
  CHECK(one.counts[0] == 1);
  CHECK(one.underflow == 0);
  CHECK(one.overflow == 0);

  const Histogram empty = histogram(std::vector<double>{}, 0.0, 1.0, 3);
  for (const auto c : empty.counts) CHECK(c == 0);

  const Histogram fenced = histogram(std::vector<double>{-3.0, 2.0, 2.5}, -2.0, 2.0, 4);
  CHECK(fenced.underflow == 1);
  CHECK(fenced.overflow == 2);

  CHECK_THROWS_AS(histogram(std::vector<double>{}, 0.0, 1.0, 0), config_error);
  CHECK_THROWS_AS(histogram(std::vector<double>{}, 1.0, 0.0, 3), config_error);
}

TEST_CASE("histogram of uniform draws is flat") {
  Rng rng(44);
  std::vector<double> xs(100000);
  for (double& x : xs) x = 5.0 * rng.uniform01();
  const Histogram h = histogram(xs, 0.0, 5.0, 10);
  std::uint64_t total = 0;
  for (const auto c : h.counts) {
    CHECK(std::abs(static_cast<double>(c) - 10000.0) < 400.0);
    total += c;
  }
  CHECK(total == 100000);
}
