#pragma once

#include <cstdint>
#include <vector>

namespace graphon {

/// Deterministic xoshiro256++ generator. We avoid <random> distributions so
/// that seeded runs produce identical streams on every platform/compiler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();

  /// Uniform in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Uniform integer in [0, n), n >= 1.
  int uniform_int(int n);

  /// Derives an independent stream; streams for distinct ids never collide
  /// in practice (splitmix64 of seed ^ id).
  Rng fork(std::uint64_t stream_id) const;

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      int j = uniform_int(i + 1);
      std::swap(v[i], v[static_cast<std::size_t>(j)]);
    }
  }

  std::vector<int> permutation(int n);

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_;
};

}  // namespace graphon
