#pragma once

#include <cmath>
#include <cstdint>

namespace cachenet {

// Deterministic, platform-independent random stream (xoshiro256++ seeded via
// splitmix64). All simulator draws go through this type so that results are
// reproducible bit-for-bit from a seed, independent of the standard library.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
  }

  // Substream derivation: mixes the parent seed with stream labels so that
  // (seed, trial index) pairs give statistically independent streams.
  static RngStream substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t x = seed;
    std::uint64_t h = splitmix64(x);
    x = h ^ (a * 0x9e3779b97f4a7c15ULL);
    h = splitmix64(x);
    x = h ^ (b * 0xbf58476d1ce4e5b9ULL);
    RngStream r(0);
    for (auto& w : r.s_) w = splitmix64(x);
    return r;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on (0, 1]; never returns 0 so log() is always safe.
  double u01() {
    const std::uint64_t bits = next_u64() >> 11;  // 53 random bits
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  bool bernoulli(double p) { return u01() <= p; }

  // Unit-mean exponential.
  double exponential() { return -std::log(u01()); }

  // Standard normal pair via Box-Muller.
  void normal_pair(double& z0, double& z1) {
    const double r = std::sqrt(2.0 * -std::log(u01()));
    const double theta = 2.0 * kPi * u01();
    z0 = r * std::cos(theta);
    z1 = r * std::sin(theta);
  }

  double normal() {
    double a, b;
    normal_pair(a, b);
    return a;
  }

  // Poisson by additivity of Knuth draws; exact for any mean.
  long poisson(double mean) {
    if (!(mean > 0)) return 0;
    long total = 0;
    while (mean > 12.0) {
      total += poisson_knuth(12.0);
      mean -= 12.0;
    }
    return total + poisson_knuth(mean);
  }

  long binomial(long n, double p) {
    long k = 0;
    for (long i = 0; i < n; ++i) k += bernoulli(p) ? 1 : 0;
    return k;
  }

  // Gamma(shape, scale 1), Marsaglia-Tsang.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = u01();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0) continue;
      v = v * v * v;
      const double u = u01();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  long poisson_knuth(double mean) {
    const double limit = std::exp(-mean);
    long k = 0;
    double prod = u01();
    while (prod > limit) {
      ++k;
      prod *= u01();
    }
    return k;
  }

  std::uint64_t s_[4];
};

}  // namespace cachenet
