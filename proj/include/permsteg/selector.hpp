#pragma once

// Blind choice of a support partitioning under a distortion constraint.
//
// Candidates are evaluated from the histogram alone, so the encoder (from
// x) and the decoder (from any rearrangement y) make the same choice.

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "permsteg/analysis.hpp"
#include "permsteg/core.hpp"
#include "permsteg/partition.hpp"

namespace permsteg {

enum class SequenceFamily { uniform, lsb, explicit_groups };

struct SelectionConstraint {
  double kappa = 1.0;  // minimum average host to watermark power ratio, linear
  SequenceFamily sequence = SequenceFamily::uniform;
  std::optional<SupportPartitioning> groups;  // for explicit_groups
};

struct Selection {
  std::size_t requested_p = 1;
  SupportPartitioning partitioning;
  MetricsReport report;
  // Rate the selection maximized: sum_j (n_j/n) H_j.
  double selection_rate = 0.0;

  std::size_t effective_p() const noexcept { return partitioning.p(); }
  bool operator==(const Selection&) const = default;
};

// Throws InfeasibleError when no candidate satisfies xi_bar >= kappa and
// Error for kappa <= 0.
Selection select_partitioning(const Histogram& h, const SelectionConstraint& c, int value_bits = 8);
Selection select_partitioning(const HostSequence& x, const SelectionConstraint& c);

// Requires y to be a rearrangement of x.
bool verify_blind_agreement(const HostSequence& x, std::span<const Sample> y,
                            const SelectionConstraint& c);

// "20", "0.5", "13db" or "13dB" to a linear ratio.
double parse_kappa(const std::string& text);

SequenceFamily parse_sequence_family(const std::string& text);

}  // namespace permsteg
