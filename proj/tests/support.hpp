#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "permsteg/core.hpp"

namespace permsteg::testing {

// Calls fn with one sorted host per multiset of size n over {0..q-1}.
inline void for_each_multiset(std::size_t n, std::size_t q,
                              const std::function<void(const std::vector<Sample>&)>& fn) {
  std::vector<Sample> x(n, 0);
  std::function<void(std::size_t, Sample)> rec = [&](std::size_t i, Sample lo) {
    if (i == n) {
      fn(x);
      return;
    }
    for (Sample v = lo; v < static_cast<Sample>(q); ++v) {
      x[i] = v;
      rec(i + 1, v);
    }
  };
  rec(0, 0);
}

// Calls fn with every sequence of length n over the given alphabet.
inline void for_each_sequence(std::size_t n, const std::vector<Sample>& alphabet,
                              const std::function<void(const std::vector<Sample>&)>& fn) {
  std::vector<std::size_t> digit(n, 0);
  std::vector<Sample> x(n, alphabet.front());
  for (;;) {
    fn(x);
    std::size_t i = 0;
    while (i < n && ++digit[i] == alphabet.size()) {
      digit[i] = 0;
      x[i] = alphabet[0];
      ++i;
    }
    if (i == n) return;
    x[i] = alphabet[digit[i]];
  }
}

inline std::vector<Sample> random_host(std::mt19937_64& rng, std::size_t n, Sample lo, Sample hi) {
  std::uniform_int_distribution<Sample> dist(lo, hi);
  std::vector<Sample> x(n);
  for (auto& v : x) v = dist(rng);
  return x;
}

inline Bits random_message(std::mt19937_64& rng, std::size_t bits) {
  Bits m(bits);
  for (auto& b : m) b = static_cast<std::uint8_t>(rng() & 1u);
  return m;
}

inline Bits bits_of(std::uint64_t value, std::size_t width) {
  Bits b(width);
  for (std::size_t i = 0; i < width; ++i) b[i] = static_cast<std::uint8_t>((value >> (width - 1 - i)) & 1u);
  return b;
}

}  // namespace permsteg::testing
