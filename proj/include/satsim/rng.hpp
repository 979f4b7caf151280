#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace sat {

// Labeled random stream. One master seed spawns independent streams keyed by
// (label, index), so e.g. the world realization does not change when the
// number of agents changes.
class RngStream {
 public:
  RngStream(std::uint64_t master, std::string_view label, std::uint64_t index = 0)
      : gen_(mix(master, label, index)) {}

  std::uint64_t next_u64() { return gen_(); }

  // [0, 1)
  double uniform() { return std::ldexp(static_cast<double>(gen_() >> 11), -53); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * M_PI * u2);
    have_cached_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  int poisson(double lambda) {
    // Knuth's method; fine for the small rates used here.
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  // Uniform integer in [0, n).
  std::size_t pick(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t mix(std::uint64_t master, std::string_view label, std::uint64_t index) {
    // FNV-1a over the label, then scrambled together with master and index.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    return splitmix(splitmix(master ^ h) ^ splitmix(index + 0x9e3779b97f4a7c15ULL));
  }

  std::mt19937_64 gen_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace sat
