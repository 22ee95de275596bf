#pragma once

#include <cstdint>

#include <boost/random/normal_distribution.hpp>

namespace escrate::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

/// SplitMix64 output function (Steele, Lea and Flood) applied to x + golden.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Key for stream `index` under a master seed. Distinct indices give
/// statistically independent keys.
inline std::uint64_t derive_key(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index));
}

/// Word k of the counter stream with the given key: a pure function of
/// (key, k), so any k can be generated without touching the others.
inline std::uint64_t counter_word(std::uint64_t key, std::uint64_t k) {
  return splitmix64(key + k * kGolden);
}

/// 64-bit generator walking counter_word(key, 0), counter_word(key, 1), ...
/// Usable with Boost and standard distributions.
class CounterEngine {
 public:
  using result_type = std::uint64_t;
  explicit CounterEngine(std::uint64_t key) : key_(key) {}
  static constexpr result_type min() { return 0u; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }
  result_type operator()() { return counter_word(key_, next_++); }

 private:
  std::uint64_t key_;
  std::uint64_t next_ = 0;
};

/// Standard normals xi(k) that depend only on (key, lane, k).
///
/// Step k feeds counter_word(derive_key(key, lane), k) to a ziggurat. Its
/// rare rejections continue on a stream whose key is derived from
/// (key, lane, k), which no other step touches.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t key, std::uint32_t lane = 0)
      : key_(derive_key(key, lane)) {}

  double operator()(std::uint64_t k) {
    StepEngine engine{this, k, counter_word(key_, k)};
    return normal_(engine);
  }

 private:
  struct StepEngine {
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0u; }
    static constexpr result_type max() { return ~std::uint64_t{0}; }

    result_type operator()() {
      if (draws++ == 0) return first;
      return owner->fallback(step, draws - 2);
    }

    const NormalStream* owner;
    std::uint64_t step;
    std::uint64_t first;
    std::uint32_t draws = 0;
  };

  [[gnu::noinline]] std::uint64_t fallback(std::uint64_t k, std::uint32_t j) const {
    return counter_word(derive_key(~key_, k), j);
  }

  std::uint64_t key_;
  boost::random::normal_distribution<double> normal_;
};

/// Standard normal that depends only on (key, step, lane); same value as
/// NormalStream(key, lane)(step).
inline double standard_normal(std::uint64_t key, std::uint64_t step, std::uint32_t lane = 0) {
  return NormalStream(key, lane)(step);
}

}  // namespace escrate::rng
