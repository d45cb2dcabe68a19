#pragma once

// Permutation coding through adaptive arithmetic coding with reverse model
// adaptation.
//
// The count table starts at the host histogram and each coded symbol
// decrements its own count, so every symbol sequence the coder can produce
// is a rearrangement of the host. Embedding runs the arithmetic *decoder*
// on the point m * 2^-c; extraction runs the arithmetic *encoder* over the
// stego sequence and returns the unique c-bit dyadic point inside the final
// interval.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "permsteg/core.hpp"

namespace permsteg {

// t orderings of the support indices 0..q-1. Stage i (1-based) of the coder
// uses permutations[i mod t]; position j of an ordering lists the support
// index whose subinterval comes j-th.
struct StegoKey {
  std::vector<std::vector<std::uint32_t>> permutations;

  std::size_t stages() const noexcept { return permutations.size(); }
  bool operator==(const StegoKey&) const = default;
};

// Throws Error unless the key has t >= 1 permutations of {0..q-1}.
void validate_key(const StegoKey& key, std::size_t q);

// Deterministic key derivation: FNV-1a 64 of the passphrase (with the stage
// index mixed in) seeds mt19937_64, which drives a Fisher-Yates shuffle with
// rejection sampling. Identical on every platform.
StegoKey derive_key(std::string_view passphrase, std::size_t q, std::size_t stages = 1);

// Restriction of a key over the full support to a subset of support
// indices (sorted ascending): each ordering keeps the relative order of the
// subset, renumbered 0..|subset|-1.
StegoKey restrict_key(const StegoKey& key, std::span<const std::size_t> subset);

// Count and support vectors as ordered at coding stage `stage` (1-based).
struct KeyedView {
  std::vector<Sample> values;
  std::vector<std::uint64_t> counts;
};
KeyedView apply_key(const Histogram& h, const StegoKey& key, std::uint64_t stage);

struct CodecOptions {
  // Bits withheld from the capacity on top of capacity_bits().
  unsigned guard_bits = 0;
};

std::uint64_t codec_capacity(const Histogram& h, const CodecOptions& options = {});

// Maps a message of at most codec_capacity() bits (zero padded to it) to a
// rearrangement of x. Throws CapacityError for longer messages.
std::vector<Sample> perm_encode(std::span<const Sample> x, const Bits& message,
                                const std::optional<StegoKey>& key = std::nullopt,
                                const CodecOptions& options = {});

// Recovers the padded message: always exactly codec_capacity() bits. Any
// rearrangement decodes to some message.
Bits perm_decode(std::span<const Sample> y, const std::optional<StegoKey>& key = std::nullopt,
                 const CodecOptions& options = {});

// Lower-level forms working against a known histogram of the sequence.
std::vector<Sample> perm_encode(const Histogram& h, const Bits& message, std::uint64_t capacity,
                                const StegoKey* key);
Bits perm_decode(const Histogram& h, std::span<const Sample> y, std::uint64_t capacity,
                 const StegoKey* key);

}  // namespace permsteg
