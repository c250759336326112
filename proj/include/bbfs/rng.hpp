#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>

namespace bbfs {

/// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Hierarchical seed derivation: folds a path of keys (purpose tags, indices)
/// into a master seed. Distinct paths give independent streams.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = mix64(master ^ 0x6a09e667f3bcc909ULL);
  for (std::uint64_t key : path) {
    h = mix64(h ^ mix64(key + 0x3c6ef372fe94f82bULL));
  }
  return h;
}

/// Purpose tags used with derive_seed.
enum class Purpose : std::uint64_t {
  weights = 1,
  positions = 2,
  chung_lu_edges = 3,
  girg_cells = 4,
  calibration = 5,
  pairs = 6,
  search = 7,
  graph = 8,
};

constexpr std::uint64_t tag(Purpose p) noexcept { return static_cast<std::uint64_t>(p); }

/// xoshiro256** with explicit, platform-independent derived distributions.
/// Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) noexcept { reseed(seed); }

  void reseed(std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      word = mix64(x);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1].
  double uniform_open_closed() noexcept { return 1.0 - uniform(); }

  /// Uniform integer in [0, bound); bound must be positive. Lemire's method.
  std::uint64_t below(std::uint64_t bound) noexcept {
    unsigned __int128 product = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  /// Number of failures before the first success of a Bernoulli(p) sequence.
  /// Returns a saturated count when p is tiny; p >= 1 yields 0.
  std::uint64_t geometric_skip(double p) noexcept {
    if (p >= 1.0) return 0;
    if (p <= 0.0) return ~std::uint64_t{0};
    const double skip = std::floor(std::log(uniform_open_closed()) / std::log1p(-p));
    if (!(skip < 1.8e19)) return ~std::uint64_t{0};
    return static_cast<std::uint64_t>(skip);
  }

  /// In-place Fisher-Yates shuffle.
  template <class T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
};

}  // namespace bbfs
