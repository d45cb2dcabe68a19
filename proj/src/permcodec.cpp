#include "permsteg/permcodec.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "permsteg/detail/count_table.hpp"
#include "permsteg/log_count.hpp"

namespace permsteg {
namespace {

__extension__ using u128 = unsigned __int128;
using detail::CountTable;

constexpr std::uint64_t kTop = std::uint64_t{1} << kCoderPrecisionBits;
constexpr std::uint64_t kHalf = kTop >> 1;
constexpr std::uint64_t kQuarter = kTop >> 2;
constexpr std::uint64_t kThreeQuarters = kHalf + kQuarter;

std::uint64_t scale(std::uint64_t range, std::uint64_t cum, std::uint64_t total) {
  return static_cast<std::uint64_t>(static_cast<u128>(range) * cum / total);
}

std::vector<std::vector<std::uint32_t>> orderings_for(std::size_t q, const StegoKey* key) {
  if (key != nullptr) return key->permutations;
  std::vector<std::uint32_t> identity(q);
  std::iota(identity.begin(), identity.end(), 0u);
  return {std::move(identity)};
}

// Interval [low, high) in register units; renormalization keeps
// high - low > kQuarter.
struct Interval {
  std::uint64_t low = 0;
  std::uint64_t high = kTop;

  void narrow(std::uint64_t cum, std::uint64_t count, std::uint64_t total) {
    const std::uint64_t range = high - low;
    high = low + scale(range, cum + count, total);
    low = low + scale(range, cum, total);
  }
};

// Arithmetic encoder output: emitted bits plus straddle-deferred bits.
class BitSink {
 public:
  void emit(std::uint8_t bit) {
    bits_.push_back(bit);
    for (; pending_ > 0; --pending_) bits_.push_back(bit ^ 1u);
  }
  void defer() { ++pending_; }

  // Smallest multiple of 2^-c not below low * 2^-(P + scalings) + the
  // emitted value, as c bits. Clamped to all ones when no such point lies
  // below 1 (a sequence no message maps to).
  Bits ceil_point(std::uint64_t low, std::uint64_t c) const {
    const std::size_t emitted = bits_.size();
    const std::size_t scalings = emitted + pending_;
    const std::size_t length = scalings + kCoderPrecisionBits;
    std::vector<std::uint8_t> value(std::max<std::size_t>(length, c), 0);
    std::copy(bits_.begin(), bits_.end(), value.begin());
    for (std::size_t i = 0; i < pending_; ++i) value[emitted + 1 + i] = 1;
    std::uint8_t carry = 0;
    for (int b = 0; b < kCoderPrecisionBits; ++b) {
      const std::size_t pos = length - 1 - static_cast<std::size_t>(b);
      const std::uint8_t sum = value[pos] + static_cast<std::uint8_t>((low >> b) & 1u) + carry;
      value[pos] = sum & 1u;
      carry = sum >> 1;
    }
    for (std::size_t pos = scalings; carry && pos-- > 0;) {
      const std::uint8_t sum = value[pos] + carry;
      value[pos] = sum & 1u;
      carry = sum >> 1;
    }
    Bits out(value.begin(), value.begin() + static_cast<std::ptrdiff_t>(c));
    const bool remainder = std::any_of(value.begin() + static_cast<std::ptrdiff_t>(c), value.end(),
                                       [](std::uint8_t v) { return v != 0; });
    if (!remainder || c == 0) return out;
    for (std::size_t pos = c; pos-- > 0;) {
      if (out[pos] == 0) {
        out[pos] = 1;
        return out;
      }
      out[pos] = 0;
    }
    return Bits(c, 1);
  }

 private:
  Bits bits_;
  std::size_t pending_ = 0;
};

// Message bits followed by an endless run of zeros.
class BitSource {
 public:
  explicit BitSource(const Bits& bits) : bits_(bits) {}
  std::uint64_t next() { return pos_ < bits_.size() ? bits_[pos_++] : 0; }

 private:
  const Bits& bits_;
  std::size_t pos_ = 0;
};

void renormalize(Interval& iv, BitSink& sink) {
  for (;;) {
    if (iv.high <= kHalf) {
      sink.emit(0);
    } else if (iv.low >= kHalf) {
      sink.emit(1);
      iv.low -= kHalf;
      iv.high -= kHalf;
    } else if (iv.low >= kQuarter && iv.high <= kThreeQuarters) {
      sink.defer();
      iv.low -= kQuarter;
      iv.high -= kQuarter;
    } else {
      return;
    }
    iv.low <<= 1;
    iv.high <<= 1;
  }
}

void renormalize(Interval& iv, std::uint64_t& point, BitSource& source) {
  for (;;) {
    std::uint64_t offset;
    if (iv.high <= kHalf) {
      offset = 0;
    } else if (iv.low >= kHalf) {
      offset = kHalf;
    } else if (iv.low >= kQuarter && iv.high <= kThreeQuarters) {
      offset = kQuarter;
    } else {
      return;
    }
    iv.low = (iv.low - offset) << 1;
    iv.high = (iv.high - offset) << 1;
    point = ((point - offset) << 1) | source.next();
  }
}

std::size_t ordering_for_stage(std::uint64_t stage, std::size_t t) {
  return static_cast<std::size_t>(stage % t);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

void validate_key(const StegoKey& key, std::size_t q) {
  if (key.permutations.empty()) throw Error("key must hold at least one permutation");
  std::vector<std::uint8_t> seen(q);
  for (const auto& perm : key.permutations) {
    if (perm.size() != q) {
      throw Error("key permutation has length " + std::to_string(perm.size()) +
                  ", support has " + std::to_string(q) + " values");
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (auto s : perm) {
      if (s >= q || seen[s]) throw Error("key entry is not a permutation of the support");
      seen[s] = 1;
    }
  }
}

StegoKey derive_key(std::string_view passphrase, std::size_t q, std::size_t stages) {
  if (stages == 0) throw Error("key needs at least one stage");
  const std::uint64_t base = fnv1a64(passphrase);
  StegoKey key;
  for (std::size_t s = 0; s < stages; ++s) {
    std::mt19937_64 rng(splitmix64(base + s));
    std::vector<std::uint32_t> perm(q);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::size_t i = q; i > 1; --i) {
      const std::uint64_t bound = i;
      const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
      std::uint64_t draw;
      do {
        draw = rng();
      } while (draw >= limit);
      std::swap(perm[i - 1], perm[draw % bound]);
    }
    key.permutations.push_back(std::move(perm));
  }
  return key;
}

StegoKey restrict_key(const StegoKey& key, std::span<const std::size_t> subset) {
  if (key.permutations.empty()) throw Error("key must hold at least one permutation");
  const std::size_t q = key.permutations.front().size();
  std::vector<std::int64_t> local(q, -1);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] >= q) throw Error("key restriction outside the support");
    local[subset[i]] = static_cast<std::int64_t>(i);
  }
  StegoKey out;
  for (const auto& perm : key.permutations) {
    std::vector<std::uint32_t> restricted;
    restricted.reserve(subset.size());
    for (auto s : perm) {
      if (local[s] >= 0) restricted.push_back(static_cast<std::uint32_t>(local[s]));
    }
    out.permutations.push_back(std::move(restricted));
  }
  return out;
}

KeyedView apply_key(const Histogram& h, const StegoKey& key, std::uint64_t stage) {
  validate_key(key, h.q());
  const auto& perm = key.permutations[ordering_for_stage(stage, key.stages())];
  KeyedView view;
  for (auto s : perm) {
    view.values.push_back(h.values[s]);
    view.counts.push_back(h.counts[s]);
  }
  return view;
}

std::uint64_t codec_capacity(const Histogram& h, const CodecOptions& options) {
  const std::uint64_t c = capacity_bits(h);
  return c > options.guard_bits ? c - options.guard_bits : 0;
}

std::vector<Sample> perm_encode(const Histogram& h, const Bits& message, std::uint64_t capacity,
                                const StegoKey* key) {
  if (message.size() > capacity) throw CapacityError(message.size(), capacity);
  Bits padded = message;
  padded.resize(capacity, 0);

  CountTable table(h.counts, orderings_for(h.q(), key));
  const std::size_t t = table.orderings();
  BitSource source(padded);
  std::uint64_t point = 0;
  for (int i = 0; i < kCoderPrecisionBits; ++i) point = (point << 1) | source.next();

  Interval iv;
  std::vector<Sample> y;
  y.reserve(h.n);
  for (std::uint64_t stage = 1; stage <= h.n; ++stage) {
    const std::size_t o = ordering_for_stage(stage, t);
    const std::uint64_t total = table.total();
    const std::uint64_t range = iv.high - iv.low;
    const std::uint64_t target = static_cast<std::uint64_t>(
        (static_cast<u128>(point - iv.low + 1) * total - 1) / range);
    const std::size_t s = table.find(o, target);
    iv.narrow(table.cumulative_before(o, s), table.count(s), total);
    table.decrement(s);
    y.push_back(h.values[s]);
    renormalize(iv, point, source);
  }
  return y;
}

Bits perm_decode(const Histogram& h, std::span<const Sample> y, std::uint64_t capacity,
                 const StegoKey* key) {
  if (y.size() != h.n) throw Error("sequence length does not match its histogram");
  CountTable table(h.counts, orderings_for(h.q(), key));
  const std::size_t t = table.orderings();
  Interval iv;
  BitSink sink;
  std::uint64_t stage = 1;
  for (Sample v : y) {
    const std::size_t s = h.index_of(v);
    if (table.count(s) == 0) throw Error("sequence does not match its histogram");
    const std::size_t o = ordering_for_stage(stage++, t);
    iv.narrow(table.cumulative_before(o, s), table.count(s), table.total());
    table.decrement(s);
    renormalize(iv, sink);
  }
  return sink.ceil_point(iv.low, capacity);
}

std::vector<Sample> perm_encode(std::span<const Sample> x, const Bits& message,
                                const std::optional<StegoKey>& key, const CodecOptions& options) {
  const Histogram h = compute_histogram(x);
  if (key) validate_key(*key, h.q());
  return perm_encode(h, message, codec_capacity(h, options), key ? &*key : nullptr);
}

Bits perm_decode(std::span<const Sample> y, const std::optional<StegoKey>& key,
                 const CodecOptions& options) {
  const Histogram h = compute_histogram(y);
  if (key) validate_key(*key, h.q());
  return perm_decode(h, y, codec_capacity(h, options), key ? &*key : nullptr);
}

}  // namespace permsteg
