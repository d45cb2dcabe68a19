#pragma once

// Partitionings of host positions and of the histogram support, and
// partitioned permutation coding on top of them.
//
// All indices are 0-based. A support partitioning groups histogram bins;
// applied to any rearrangement of a host it induces the same sub-histograms,
// which is what lets a decoder rebuild the encoder's partitioning blindly.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "permsteg/core.hpp"
#include "permsteg/permcodec.hpp"

namespace permsteg {

struct IndexPartitioning {
  // Disjoint, each ascending, jointly covering 0..n-1.
  std::vector<std::vector<std::size_t>> index_vectors;

  std::size_t p() const noexcept { return index_vectors.size(); }
  bool operator==(const IndexPartitioning&) const = default;
};

struct SupportPartitioning {
  // Disjoint nonempty groups of support indices, each ascending, jointly
  // covering 0..q-1.
  std::vector<std::vector<std::size_t>> groups;

  std::size_t p() const noexcept { return groups.size(); }
  bool operator==(const SupportPartitioning&) const = default;
};

void validate(const IndexPartitioning& part, std::size_t n);
void validate(const SupportPartitioning& part, std::size_t q);

IndexPartitioning trivial_partitioning(std::size_t n);
SupportPartitioning trivial_support_partitioning(std::size_t q);

IndexPartitioning support_induced(const SupportPartitioning& sp, std::span<const Sample> x,
                                  const Histogram& h);
IndexPartitioning support_induced(const SupportPartitioning& sp, std::span<const Sample> x);

// Sub-histograms of h for each support group, in group order.
std::vector<Histogram> group_histograms(const Histogram& h, const SupportPartitioning& sp);

// Histograms of the subvectors x_j.
std::vector<Histogram> partition_histograms(std::span<const Sample> x, const IndexPartitioning& part);

std::vector<std::vector<Sample>> gather(std::span<const Sample> x, const IndexPartitioning& part);
std::vector<Sample> scatter(const std::vector<std::vector<Sample>>& parts,
                            const IndexPartitioning& part);

// Nearest-centroid grouping of the support v into at most p connected
// groups, centroids v_1 + (j - 1/2)(v_q - v_1)/p. Ties go to the lower
// group; empty groups are dropped. Accepts any p >= 1.
SupportPartitioning centroid_partitioning(std::span<const Sample> v, std::size_t p);

// The p-th member of the uniform sequence; requires 1 <= p <= q. The last
// member is always the singleton partitioning, even on gapped supports.
SupportPartitioning uniform_support_sequence(std::span<const Sample> v, std::size_t p);

// Adjacent bin pairs {0,1}, {2,3}, ...; the last group is a singleton for
// odd q.
SupportPartitioning lsb_pairing(std::size_t q);

std::uint64_t partitioned_capacity(std::span<const Histogram> parts, const CodecOptions& options = {});

// The message is split into consecutive chunks, one per partition in order,
// each as long as that partition's capacity.
std::vector<Sample> partitioned_encode(std::span<const Sample> x, const IndexPartitioning& part,
                                       const Bits& message,
                                       const std::optional<StegoKey>& key = std::nullopt,
                                       const CodecOptions& options = {});

Bits partitioned_decode(std::span<const Sample> y, const IndexPartitioning& part,
                        const std::optional<StegoKey>& key = std::nullopt,
                        const CodecOptions& options = {});

// Bell number of q, or 2^(q-1) when only connected groups are allowed.
boost::multiprecision::cpp_int count_support_partitionings(std::size_t q, bool connected_only);

// One line per group: "group j: a..b" for runs of consecutive support
// indices, comma separated values otherwise. Groups are numbered from 1.
std::string format_support_partitioning(const SupportPartitioning& sp, std::span<const Sample> v);

}  // namespace permsteg
