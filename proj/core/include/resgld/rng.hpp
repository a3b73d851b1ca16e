#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace resgld {

/// SplitMix64 mixing step; used to spread a seed into stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// A deterministic random stream. Draw functions consume a fixed number of
/// engine outputs per call (uniform: 1, normal: 2), so sequences are
/// predictable and identical across platforms for a given seed.
class Rng {
public:
  Rng() : eng_(0) {}
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, bound).
  std::uint64_t uniform_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(uniform01() * static_cast<double>(bound));
  }

  /// Standard normal via Box-Muller; exactly two engine outputs per call.
  double normal() {
    double u1 = uniform01();
    const double u2 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

private:
  std::mt19937_64 eng_;
};

/// Named independent streams derived from one master seed. Consumers own
/// their stream, so enabling or disabling one consumer (e.g. variance probes)
/// never shifts the draws seen by the others.
struct RngStreams {
  Rng data_gen;
  Rng batch;
  Rng chain1_noise;
  Rng chain2_noise;
  Rng swap;
  Rng probe;

  static RngStreams make(std::uint64_t master_seed) {
    auto stream = [master_seed](std::uint64_t tag) {
      std::uint64_t s = master_seed ^ (0xa0761d6478bd642fULL * (tag + 1));
      return Rng(splitmix64(s));
    };
    RngStreams r;
    r.data_gen = stream(0);
    r.batch = stream(1);
    r.chain1_noise = stream(2);
    r.chain2_noise = stream(3);
    r.swap = stream(4);
    r.probe = stream(5);
    return r;
  }
};

}  // namespace resgld
