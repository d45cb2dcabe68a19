#include "permsteg/core.hpp"

#include <algorithm>

namespace permsteg {

CapacityError::CapacityError(std::uint64_t requested, std::uint64_t available)
    : Error("capacity exceeded: message has " + std::to_string(requested) +
            " bits, capacity is " + std::to_string(available)),
      requested_(requested),
      available_(available) {}

std::size_t Histogram::index_of(Sample v) const {
  auto it = std::lower_bound(values.begin(), values.end(), v);
  if (it == values.end() || *it != v) {
    throw Error("value " + std::to_string(v) + " is not in the support");
  }
  return static_cast<std::size_t>(it - values.begin());
}

Histogram compute_histogram(std::span<const Sample> x) {
  if (x.empty()) throw Error("empty host");
  if (x.size() > kMaxHostLength) throw Error("host longer than 2^40 samples");
  std::vector<Sample> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  Histogram h;
  h.n = sorted.size();
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    h.values.push_back(sorted[i]);
    h.counts.push_back(j - i);
    i = j;
  }
  return h;
}

void validate(const Histogram& h) {
  if (h.values.size() != h.counts.size()) {
    throw Error("histogram values and counts differ in length");
  }
  if (h.values.empty()) throw Error("empty histogram");
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < h.q(); ++k) {
    if (k > 0 && h.values[k] <= h.values[k - 1]) {
      throw Error("histogram support is not strictly increasing");
    }
    if (h.counts[k] == 0) throw Error("histogram has a zero count");
    total += h.counts[k];
  }
  if (total != h.n) throw Error("histogram counts do not sum to n");
  if (h.n > kMaxHostLength) throw Error("host longer than 2^40 samples");
}

std::vector<std::uint8_t> bits_to_bytes(const Bits& bits) {
  std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return out;
}

Bits bytes_to_bits(std::span<const std::uint8_t> bytes) {
  Bits out;
  out.reserve(bytes.size() * 8);
  for (std::uint8_t b : bytes) {
    for (int i = 7; i >= 0; --i) out.push_back((b >> i) & 1u);
  }
  return out;
}

std::string bits_to_string(const Bits& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

Bits bits_from_string(const std::string& s) {
  Bits out;
  out.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw Error("bit string may only contain 0 and 1");
    out.push_back(c == '1');
  }
  return out;
}

}  // namespace permsteg
