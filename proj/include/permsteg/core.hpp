#pragma once

// Host, histogram and message representations shared by every module.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace permsteg {

using Sample = std::int32_t;

// One entry per bit, each 0 or 1, most significant first.
using Bits = std::vector<std::uint8_t>;

// Histograms are capped so that the coder's count table fits its precision
// budget (see permcodec.hpp).
inline constexpr std::uint64_t kMaxHostLength = std::uint64_t{1} << 40;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapacityError : public Error {
 public:
  CapacityError(std::uint64_t requested, std::uint64_t available);
  std::uint64_t requested() const noexcept { return requested_; }
  std::uint64_t available() const noexcept { return available_; }

 private:
  std::uint64_t requested_;
  std::uint64_t available_;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

struct HostSequence {
  std::vector<Sample> samples;
  // Nominal bit depth, only used by the peak power ratios.
  int value_bits = 8;

  std::size_t size() const noexcept { return samples.size(); }
};

// Sorted support v and positive counts h of a host.
struct Histogram {
  std::vector<Sample> values;
  std::vector<std::uint64_t> counts;
  std::uint64_t n = 0;

  std::size_t q() const noexcept { return values.size(); }
  // Index k with values[k] == v; throws Error when v is not in the support.
  std::size_t index_of(Sample v) const;

  bool operator==(const Histogram&) const = default;
};

Histogram compute_histogram(std::span<const Sample> x);
inline Histogram compute_histogram(const HostSequence& x) {
  return compute_histogram(std::span<const Sample>(x.samples));
}

// Throws Error unless values are strictly increasing, counts positive and
// summing to n.
void validate(const Histogram& h);

// Packs bits MSB-first into bytes, zero padding the last byte.
std::vector<std::uint8_t> bits_to_bytes(const Bits& bits);
Bits bytes_to_bits(std::span<const std::uint8_t> bytes);
std::string bits_to_string(const Bits& bits);
Bits bits_from_string(const std::string& s);

}  // namespace permsteg
