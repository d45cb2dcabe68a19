#pragma once

// End-to-end embedding and blind extraction: partition selection under a
// distortion constraint, optional key, partitioned permutation coding.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "permsteg/analysis.hpp"
#include "permsteg/core.hpp"
#include "permsteg/permcodec.hpp"
#include "permsteg/selector.hpp"

namespace permsteg {

struct StegoConfig {
  SelectionConstraint constraint;
  std::optional<std::string> passphrase;
  std::size_t key_stages = 1;
  CodecOptions codec;
  int value_bits = 8;
};

struct EmbedResult {
  std::vector<Sample> stego;
  Selection selection;
  std::uint64_t capacity = 0;
  EmpiricalMetrics empirical;
};

struct ExtractResult {
  Bits message;  // exactly `capacity` bits
  Selection selection;
  std::uint64_t capacity = 0;
};

// Capacity of x under the configuration (selection included).
std::uint64_t embedding_capacity(std::span<const Sample> x, const StegoConfig& config);

// Throws CapacityError when the message exceeds the selected capacity and
// InfeasibleError when no partitioning meets the constraint.
EmbedResult embed(std::span<const Sample> x, const Bits& message, const StegoConfig& config);
ExtractResult extract(std::span<const Sample> y, const StegoConfig& config);

}  // namespace permsteg
