#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace eventformer {

// Deterministic random source. All distributions are implemented on top of
// raw 64-bit draws so results do not depend on the standard library's
// <random> distribution internals.
//
// Named sub-streams let one top-level seed drive independent stages
// (simulation, masking, init, dropout, batching) reproducibly:
//   Rng sim = Rng(seed).derive("simulate", sequence_index);
class Rng {
 public:
  explicit Rng(uint64_t seed) : base_seed_(seed), engine_(mix(seed)) {}

  // Child stream keyed by (base seed, stream name, index).
  Rng derive(std::string_view stream, uint64_t index = 0) const {
    uint64_t h = 1469598103934665603ull;  // FNV-1a over the stream name
    for (char c : stream) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    return Rng(mix(base_seed_ ^ mix(h ^ mix(index))));
  }

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Uniform integer in [0, n), n > 0.
  uint64_t below(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  double exponential(double rate) {
    double u = uniform();
    return -std::log1p(-u) / rate;
  }

  double normal(double mean = 0.0, double stddev = 1.0) {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double z = std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    return mean + stddev * z;
  }

  // Geometric on {1, 2, ...} with mean 1/p.
  long geometric(double p) {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return 1 + static_cast<long>(std::floor(std::log(u) / std::log1p(-p)));
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  uint64_t base_seed() const { return base_seed_; }

 private:
  static uint64_t mix(uint64_t x) {  // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  uint64_t base_seed_;
  std::mt19937_64 engine_;
};

}  // namespace eventformer
