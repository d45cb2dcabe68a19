#include "permsteg/partition.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "permsteg/log_count.hpp"

namespace permsteg {
namespace {

__extension__ using i128 = __int128;

constexpr std::size_t kMaxBellArgument = 2048;

template <typename Groups>
void validate_cover(const Groups& groups, std::size_t size, const char* what) {
  std::vector<std::uint8_t> seen(size, 0);
  std::size_t covered = 0;
  for (const auto& g : groups) {
    if (g.empty()) throw Error(std::string(what) + " has an empty group");
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] >= size) throw Error(std::string(what) + " index out of range");
      if (i > 0 && g[i] <= g[i - 1]) throw Error(std::string(what) + " group is not ascending");
      if (seen[g[i]]) throw Error(std::string(what) + " groups overlap");
      seen[g[i]] = 1;
      ++covered;
    }
  }
  if (covered != size) throw Error(std::string(what) + " does not cover every index");
}

const StegoKey* restricted_key(const std::optional<StegoKey>& key, const Histogram& global,
                               const Histogram& local, std::optional<StegoKey>& storage) {
  if (!key) return nullptr;
  std::vector<std::size_t> subset;
  subset.reserve(local.q());
  for (Sample v : local.values) subset.push_back(global.index_of(v));
  storage = restrict_key(*key, subset);
  return &*storage;
}

}  // namespace

void validate(const IndexPartitioning& part, std::size_t n) {
  validate_cover(part.index_vectors, n, "index partitioning");
}

void validate(const SupportPartitioning& part, std::size_t q) {
  validate_cover(part.groups, q, "support partitioning");
}

IndexPartitioning trivial_partitioning(std::size_t n) {
  IndexPartitioning part;
  part.index_vectors.emplace_back(n);
  std::iota(part.index_vectors[0].begin(), part.index_vectors[0].end(), std::size_t{0});
  return part;
}

SupportPartitioning trivial_support_partitioning(std::size_t q) {
  SupportPartitioning sp;
  sp.groups.emplace_back(q);
  std::iota(sp.groups[0].begin(), sp.groups[0].end(), std::size_t{0});
  return sp;
}

IndexPartitioning support_induced(const SupportPartitioning& sp, std::span<const Sample> x,
                                  const Histogram& h) {
  validate(sp, h.q());
  std::vector<std::size_t> group_of(h.q());
  for (std::size_t j = 0; j < sp.p(); ++j) {
    for (auto k : sp.groups[j]) group_of[k] = j;
  }
  IndexPartitioning part;
  part.index_vectors.resize(sp.p());
  for (std::size_t i = 0; i < x.size(); ++i) {
    part.index_vectors[group_of[h.index_of(x[i])]].push_back(i);
  }
  return part;
}

IndexPartitioning support_induced(const SupportPartitioning& sp, std::span<const Sample> x) {
  return support_induced(sp, x, compute_histogram(x));
}

std::vector<Histogram> group_histograms(const Histogram& h, const SupportPartitioning& sp) {
  std::vector<Histogram> out;
  out.reserve(sp.p());
  for (const auto& g : sp.groups) {
    Histogram sub;
    for (auto k : g) {
      sub.values.push_back(h.values[k]);
      sub.counts.push_back(h.counts[k]);
      sub.n += h.counts[k];
    }
    out.push_back(std::move(sub));
  }
  return out;
}

std::vector<Histogram> partition_histograms(std::span<const Sample> x, const IndexPartitioning& part) {
  std::vector<Histogram> out;
  out.reserve(part.p());
  for (const auto& sub : gather(x, part)) out.push_back(compute_histogram(sub));
  return out;
}

std::vector<std::vector<Sample>> gather(std::span<const Sample> x, const IndexPartitioning& part) {
  std::vector<std::vector<Sample>> out;
  out.reserve(part.p());
  for (const auto& u : part.index_vectors) {
    std::vector<Sample> sub;
    sub.reserve(u.size());
    for (auto i : u) sub.push_back(x[i]);
    out.push_back(std::move(sub));
  }
  return out;
}

std::vector<Sample> scatter(const std::vector<std::vector<Sample>>& parts,
                            const IndexPartitioning& part) {
  std::size_t n = 0;
  for (const auto& u : part.index_vectors) n += u.size();
  std::vector<Sample> y(n);
  for (std::size_t j = 0; j < part.p(); ++j) {
    const auto& u = part.index_vectors[j];
    if (parts[j].size() != u.size()) throw Error("partition length mismatch in scatter");
    for (std::size_t i = 0; i < u.size(); ++i) y[u[i]] = parts[j][i];
  }
  return y;
}

SupportPartitioning centroid_partitioning(std::span<const Sample> v, std::size_t p) {
  if (v.empty()) throw Error("empty support");
  if (p == 0) throw Error("number of partitions must be at least 1");
  const i128 lo = v.front();
  const i128 span = static_cast<i128>(v.back()) - lo;
  const i128 pp = static_cast<i128>(p);
  std::vector<std::vector<std::size_t>> groups(p);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (span == 0) {
      groups[0].push_back(k);
      continue;
    }
    // Distances scaled by 2p: |2p (v_k - v_1) - (2j - 1)(v_q - v_1)|.
    const i128 offset = 2 * pp * (static_cast<i128>(v[k]) - lo);
    const i128 guess = (pp * (static_cast<i128>(v[k]) - lo)) / span;
    std::size_t best = 0;
    i128 best_dist = -1;
    for (i128 j = guess - 1; j <= guess + 1; ++j) {
      if (j < 0 || j >= pp) continue;
      i128 dist = offset - (2 * j + 1) * span;
      if (dist < 0) dist = -dist;
      if (best_dist < 0 || dist < best_dist) {
        best_dist = dist;
        best = static_cast<std::size_t>(j);
      }
    }
    groups[best].push_back(k);
  }
  SupportPartitioning sp;
  for (auto& g : groups) {
    if (!g.empty()) sp.groups.push_back(std::move(g));
  }
  return sp;
}

SupportPartitioning uniform_support_sequence(std::span<const Sample> v, std::size_t p) {
  if (p < 1 || p > v.size()) {
    throw Error("number of partitions " + std::to_string(p) + " outside 1.." +
                std::to_string(v.size()));
  }
  if (p == v.size()) {
    SupportPartitioning sp;
    for (std::size_t k = 0; k < p; ++k) sp.groups.push_back({k});
    return sp;
  }
  return centroid_partitioning(v, p);
}

SupportPartitioning lsb_pairing(std::size_t q) {
  if (q == 0) throw Error("empty support");
  SupportPartitioning sp;
  for (std::size_t k = 0; k < q; k += 2) {
    if (k + 1 < q) {
      sp.groups.push_back({k, k + 1});
    } else {
      sp.groups.push_back({k});
    }
  }
  return sp;
}

std::uint64_t partitioned_capacity(std::span<const Histogram> parts, const CodecOptions& options) {
  std::uint64_t total = 0;
  for (const auto& h : parts) total += codec_capacity(h, options);
  return total;
}

std::vector<Sample> partitioned_encode(std::span<const Sample> x, const IndexPartitioning& part,
                                       const Bits& message, const std::optional<StegoKey>& key,
                                       const CodecOptions& options) {
  validate(part, x.size());
  const Histogram global = compute_histogram(x);
  if (key) validate_key(*key, global.q());
  const auto subs = gather(x, part);
  std::vector<Histogram> hists;
  hists.reserve(subs.size());
  for (const auto& s : subs) hists.push_back(compute_histogram(s));
  const std::uint64_t capacity = partitioned_capacity(hists, options);
  if (message.size() > capacity) throw CapacityError(message.size(), capacity);

  std::vector<std::vector<Sample>> coded(part.p());
  std::size_t offset = 0;
  for (std::size_t j = 0; j < part.p(); ++j) {
    const std::uint64_t cj = codec_capacity(hists[j], options);
    Bits chunk(cj, 0);
    for (std::size_t b = 0; b < cj && offset + b < message.size(); ++b) chunk[b] = message[offset + b];
    offset += cj;
    std::optional<StegoKey> storage;
    coded[j] = perm_encode(hists[j], chunk, cj, restricted_key(key, global, hists[j], storage));
  }
  return scatter(coded, part);
}

Bits partitioned_decode(std::span<const Sample> y, const IndexPartitioning& part,
                        const std::optional<StegoKey>& key, const CodecOptions& options) {
  validate(part, y.size());
  const Histogram global = compute_histogram(y);
  if (key) validate_key(*key, global.q());
  Bits message;
  for (const auto& sub : gather(y, part)) {
    const Histogram hj = compute_histogram(sub);
    std::optional<StegoKey> storage;
    const Bits chunk = perm_decode(hj, sub, codec_capacity(hj, options),
                                   restricted_key(key, global, hj, storage));
    message.insert(message.end(), chunk.begin(), chunk.end());
  }
  return message;
}

boost::multiprecision::cpp_int count_support_partitionings(std::size_t q, bool connected_only) {
  using boost::multiprecision::cpp_int;
  if (q == 0) throw Error("support size must be at least 1");
  if (connected_only) return cpp_int(1) << (q - 1);
  if (q > kMaxBellArgument) throw Error("Bell number argument beyond supported range");
  // Bell triangle: each row starts with the last entry of the previous one.
  std::vector<cpp_int> row{1};
  for (std::size_t i = 1; i < q; ++i) {
    std::vector<cpp_int> next;
    next.reserve(row.size() + 1);
    next.push_back(row.back());
    for (const auto& r : row) next.push_back(next.back() + r);
    row = std::move(next);
  }
  return row.back();
}

std::string format_support_partitioning(const SupportPartitioning& sp, std::span<const Sample> v) {
  std::ostringstream os;
  for (std::size_t j = 0; j < sp.p(); ++j) {
    const auto& g = sp.groups[j];
    os << "group " << j + 1 << ": ";
    const bool run = g.back() - g.front() + 1 == g.size();
    if (run && g.size() > 1) {
      os << v[g.front()] << ".." << v[g.back()];
    } else {
      for (std::size_t i = 0; i < g.size(); ++i) os << (i ? "," : "") << v[g[i]];
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace permsteg
