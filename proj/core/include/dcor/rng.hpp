#pragma once

// Deterministic, splittable pseudorandom streams.
//
// A stream is a xoshiro256** generator whose state is derived from a master
// seed and a path of stream ids through SplitMix64 mixing. Streams with
// different paths are statistically independent, and every variate below
// is computed in-library, so a given (seed, path) produces the same draws
// on every platform and standard library.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>

namespace dcor {

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept { return next(); }

  std::uint64_t next() noexcept;
  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  // Unbiased integer in [0, bound); bound > 0.
  std::uint64_t uniform_index(std::uint64_t bound) noexcept;
  double normal() noexcept;
  // Gamma(shape, 1); shape > 0.
  double gamma(double shape) noexcept;
  double chi_square(double df) noexcept;

  template <typename T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

// SplitMix64 output function applied to x.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Stream for (master_seed, stream_id).
Rng rng_stream(std::uint64_t master_seed, std::uint64_t stream_id);

// Stream for a path of ids, e.g. (seed, {n, dataset, purpose}).
Rng rng_stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path);

}  // namespace dcor
