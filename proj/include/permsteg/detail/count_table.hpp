#pragma once

// Mutable symbol counts viewed through one or more symbol orderings.
// Small alphabets use linear scans, larger ones a Fenwick tree per ordering.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace permsteg::detail {

inline constexpr std::size_t kLinearScanLimit = 64;

class CountTable {
 public:
  enum class Layout { automatic, linear, fenwick };

  // orderings[o][pos] is the symbol at position pos of ordering o.
  CountTable(std::span<const std::uint64_t> counts,
             std::vector<std::vector<std::uint32_t>> orderings,
             Layout layout = Layout::automatic);

  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t count(std::size_t symbol) const { return counts_[symbol]; }
  std::size_t orderings() const noexcept { return orderings_.size(); }

  // Sum of counts of the symbols preceding `symbol` in ordering o.
  std::uint64_t cumulative_before(std::size_t o, std::size_t symbol) const;

  // Symbol s of ordering o with cumulative_before(o, s) <= target <
  // cumulative_before(o, s) + count(s). Requires target < total().
  std::size_t find(std::size_t o, std::uint64_t target) const;

  // Requires count(symbol) > 0.
  void decrement(std::size_t symbol);

 private:
  std::vector<std::uint64_t> counts_;
  std::vector<std::vector<std::uint32_t>> orderings_;
  std::vector<std::vector<std::uint32_t>> position_of_;
  // trees_[o] is 1-based over positions of ordering o.
  std::vector<std::vector<std::uint64_t>> trees_;
  std::uint64_t total_ = 0;
  bool fenwick_ = false;
};

}  // namespace permsteg::detail
