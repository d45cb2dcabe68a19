#include "permsteg/detail/count_table.hpp"

#include <bit>
#include <stdexcept>

namespace permsteg::detail {

CountTable::CountTable(std::span<const std::uint64_t> counts,
                       std::vector<std::vector<std::uint32_t>> orderings, Layout layout)
    : counts_(counts.begin(), counts.end()), orderings_(std::move(orderings)) {
  const std::size_t q = counts_.size();
  if (orderings_.empty()) throw std::invalid_argument("count table needs an ordering");
  for (auto c : counts_) total_ += c;
  fenwick_ = layout == Layout::fenwick || (layout == Layout::automatic && q > kLinearScanLimit);

  position_of_.resize(orderings_.size());
  for (std::size_t o = 0; o < orderings_.size(); ++o) {
    if (orderings_[o].size() != q) throw std::invalid_argument("ordering length mismatch");
    position_of_[o].assign(q, 0);
    for (std::size_t pos = 0; pos < q; ++pos) position_of_[o][orderings_[o][pos]] = static_cast<std::uint32_t>(pos);
  }
  if (!fenwick_) return;

  trees_.resize(orderings_.size());
  for (std::size_t o = 0; o < orderings_.size(); ++o) {
    auto& tree = trees_[o];
    tree.assign(q + 1, 0);
    for (std::size_t pos = 0; pos < q; ++pos) tree[pos + 1] = counts_[orderings_[o][pos]];
    for (std::size_t i = 1; i <= q; ++i) {
      const std::size_t parent = i + (i & (~i + 1));
      if (parent <= q) tree[parent] += tree[i];
    }
  }
}

std::uint64_t CountTable::cumulative_before(std::size_t o, std::size_t symbol) const {
  const std::size_t pos = position_of_[o][symbol];
  std::uint64_t sum = 0;
  if (!fenwick_) {
    for (std::size_t p = 0; p < pos; ++p) sum += counts_[orderings_[o][p]];
    return sum;
  }
  const auto& tree = trees_[o];
  for (std::size_t i = pos; i > 0; i &= i - 1) sum += tree[i];
  return sum;
}

std::size_t CountTable::find(std::size_t o, std::uint64_t target) const {
  const auto& order = orderings_[o];
  if (!fenwick_) {
    std::uint64_t cum = 0;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      cum += counts_[order[pos]];
      if (target < cum) return order[pos];
    }
    throw std::out_of_range("count table target beyond total");
  }
  // Largest prefix length whose sum stays <= target; the next position holds
  // the answer and necessarily has a nonzero count.
  const auto& tree = trees_[o];
  const std::size_t q = order.size();
  std::size_t idx = 0;
  for (std::size_t step = std::bit_floor(q); step > 0; step >>= 1) {
    const std::size_t next = idx + step;
    if (next <= q && tree[next] <= target) {
      idx = next;
      target -= tree[next];
    }
  }
  if (idx >= q) throw std::out_of_range("count table target beyond total");
  return order[idx];
}

void CountTable::decrement(std::size_t symbol) {
  if (counts_[symbol] == 0) throw std::logic_error("decrement of an exhausted symbol");
  --counts_[symbol];
  --total_;
  if (!fenwick_) return;
  const std::size_t q = counts_.size();
  for (std::size_t o = 0; o < trees_.size(); ++o) {
    auto& tree = trees_[o];
    for (std::size_t i = position_of_[o][symbol] + 1; i <= q; i += i & (~i + 1)) --tree[i];
  }
}

}  // namespace permsteg::detail
