#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace mmplan {

// Counter-based pseudo-random generator built on the SplitMix64 finalizer.
// A stream is identified by a 64-bit key derived from the master seed and an
// arbitrary tuple of substream labels (trial, grid, ue, link, ...).  Draws are
// a pure function of (key, counter), so independent streams can be consumed
// from any thread in any order and still reproduce bit-identically.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Derives a substream key by folding labels into the parent key one at a
  // time; mix() is applied between folds so label tuples never collide with
  // permuted ones.
  template <typename... Labels>
  CounterRng stream(Labels... labels) const {
    std::uint64_t k = key_;
    ((k = mix(k ^ static_cast<std::uint64_t>(labels))), ...);
    return CounterRng(k);
  }

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ull); }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double next_double(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    // Modulo bias is < 2^-53 for the n used here (grid/site counts).
    return n == 0 ? 0 : next_u64() % n;
  }

  // Poisson draw by CDF inversion; suitable for the moderate means used by
  // the simulator (per-grid UE counts, test oracles up to mu ~ 1e2).
  int next_poisson(double mu);

  // Draws k distinct indices from [0, n) uniformly, in ascending order.
  std::vector<int> next_subset(int n, int k);

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline int CounterRng::next_poisson(double mu) {
  if (mu <= 0.0) return 0;
  double u = next_double();
  double p = std::exp(-mu);
  double cum = p;
  int k = 0;
  const int cap = static_cast<int>(10.0 * mu) + 100;
  while (u > cum && k < cap) {
    ++k;
    p *= mu / k;
    cum += p;
  }
  return k;
}

inline std::vector<int> CounterRng::next_subset(int n, int k) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace mmplan
