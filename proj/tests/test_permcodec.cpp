#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "permsteg/detail/count_table.hpp"
#include "permsteg/log_count.hpp"
#include "permsteg/oracle.hpp"
#include "permsteg/permcodec.hpp"
#include "support.hpp"

using namespace permsteg;

namespace {

bool same_histogram(std::span<const Sample> a, std::span<const Sample> b) {
  return compute_histogram(a) == compute_histogram(b);
}

Bits prefix(const Bits& b, std::size_t len) { return Bits(b.begin(), b.begin() + static_cast<long>(len)); }

}  // namespace

TEST_CASE("two messages on a three-element host") {
  const std::vector<Sample> x{0, 0, 1};
  CHECK(codec_capacity(compute_histogram(x)) == 1);
  const auto y0 = perm_encode(x, bits_from_string("0"));
  const auto y1 = perm_encode(x, bits_from_string("1"));
  CHECK(y0 != y1);
  CHECK(same_histogram(x, y0));
  CHECK(same_histogram(x, y1));
  CHECK(perm_decode(y1) == bits_from_string("1"));
  CHECK(perm_decode(y0) == bits_from_string("0"));
}

TEST_CASE("constant host carries nothing") {
  const std::vector<Sample> x{5, 5, 5};
  CHECK(perm_encode(x, Bits{}) == x);
  CHECK(perm_decode(x).empty());
  CHECK_THROWS_AS(perm_encode(x, bits_from_string("1")), CapacityError);
}

TEST_CASE("seven-element host maps 128 messages to distinct rearrangements") {
  const std::vector<Sample> x{1, 2, 3, 4, 4, 4, 4};
  const auto report = oracle::table_codec(x);
  CHECK(report.capacity == 7);
  CHECK(report.messages == 128);
  CHECK(report.r == 210);
  CHECK(report.injective);
  CHECK(report.members);
  CHECK(report.round_trip);
  CHECK(report.coverage == oracle::Rational(128, 210));
}

TEST_CASE("overlong message is rejected") {
  const std::vector<Sample> x{1, 2, 3, 4, 4, 4, 4};
  try {
    perm_encode(x, Bits(8, 1));
    FAIL("expected CapacityError");
  } catch (const CapacityError& e) {
    CHECK(e.requested() == 8);
    CHECK(e.available() == 7);
  }
}

TEST_CASE("short messages are zero padded") {
  const std::vector<Sample> x{1, 2, 3, 4, 4, 4, 4};
  const auto y = perm_encode(x, bits_from_string("101"));
  CHECK(y == perm_encode(x, bits_from_string("1010000")));
  CHECK(perm_decode(y) == bits_from_string("1010000"));
}

TEST_CASE("every host up to n = 8 over three values codes injectively") {
  const std::vector<Sample> alphabet{-3, 0, 7};
  for (std::size_t n = 1; n <= 8; ++n) {
    testing::for_each_sequence(n, alphabet, [&](const std::vector<Sample>& x) {
      if (!std::is_sorted(x.begin(), x.end())) return;
      const auto report = oracle::table_codec(x);
      CHECK(report.injective);
      CHECK(report.members);
      CHECK(report.round_trip);
    });
  }
}

TEST_CASE("keyed coding stays injective on small hosts") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    const auto x = testing::random_host(rng, n, 0, 4);
    const Histogram h = compute_histogram(x);
    const StegoKey key = derive_key("trial " + std::to_string(trial), h.q(), 1 + rng() % 3);
    const auto report = oracle::table_codec(x, &key);
    CHECK(report.injective);
    CHECK(report.members);
    CHECK(report.round_trip);
  }
}

TEST_CASE("random round-trips with and without keys") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 2000;
    const Sample hi = static_cast<Sample>(1 + rng() % 300);
    const auto x = testing::random_host(rng, n, -hi, hi);
    const Histogram h = compute_histogram(x);
    const std::uint64_t c = codec_capacity(h);
    const Bits m = testing::random_message(rng, c);
    std::optional<StegoKey> key;
    if (trial % 2) key = derive_key("k" + std::to_string(trial), h.q(), 1 + rng() % 4);
    const auto y = perm_encode(x, m, key);
    CHECK(same_histogram(x, y));
    CHECK(perm_decode(y, key) == m);
  }
}

TEST_CASE("round-trip of a 10^5-bit prefix on a 10^6 binary host") {
  std::mt19937_64 rng(5);
  std::vector<Sample> x(1'000'000, 0);
  std::fill(x.begin(), x.begin() + 500'000, 1);
  std::shuffle(x.begin(), x.end(), rng);
  const Bits m = testing::random_message(rng, 100'000);
  const auto y = perm_encode(x, m);
  CHECK(same_histogram(x, y));
  const Bits back = perm_decode(y);
  CHECK(back.size() == codec_capacity(compute_histogram(x)));
  CHECK(prefix(back, m.size()) == m);
  CHECK(std::all_of(back.begin() + static_cast<long>(m.size()), back.end(), [](auto b) { return b == 0; }));
}

TEST_CASE("encoding is deterministic") {
  std::mt19937_64 rng(9);
  const auto x = testing::random_host(rng, 5000, 0, 255);
  const Histogram h = compute_histogram(x);
  const Bits m = testing::random_message(rng, codec_capacity(h));
  const StegoKey key = derive_key("same", h.q(), 2);
  CHECK(perm_encode(x, m, key) == perm_encode(x, m, key));
  CHECK(derive_key("same", h.q(), 2) == key);
}

TEST_CASE("a wrong key almost never recovers the message") {
  std::mt19937_64 rng(13);
  int hits = 0;
  const int trials = 10'000;
  for (int trial = 0; trial < trials; ++trial) {
    const auto x = testing::random_host(rng, 24, 0, 5);
    const Histogram h = compute_histogram(x);
    const std::uint64_t c = codec_capacity(h);
    REQUIRE(c >= 16);
    const Bits m = testing::random_message(rng, c);
    const StegoKey right = derive_key("right" + std::to_string(trial), h.q());
    StegoKey wrong = derive_key("wrong" + std::to_string(trial), h.q());
    if (wrong == right) std::reverse(wrong.permutations[0].begin(), wrong.permutations[0].end());
    hits += perm_decode(perm_encode(x, m, right), wrong) == m;
  }
  CHECK(hits <= trials / 1024);
}

TEST_CASE("key validation") {
  StegoKey key{{{0, 1, 2}}};
  CHECK_NOTHROW(validate_key(key, 3));
  CHECK_THROWS_AS(validate_key(key, 4), Error);
  key.permutations[0] = {0, 0, 2};
  CHECK_THROWS_AS(validate_key(key, 3), Error);
  CHECK_THROWS_AS(validate_key(StegoKey{}, 3), Error);
  const std::vector<Sample> x{0, 1, 2};
  CHECK_THROWS_AS(perm_encode(x, Bits{}, StegoKey{{{0, 1}}}), Error);
}

TEST_CASE("identity key matches unkeyed coding") {
  std::mt19937_64 rng(17);
  const auto x = testing::random_host(rng, 300, 0, 9);
  const Histogram h = compute_histogram(x);
  StegoKey id{{std::vector<std::uint32_t>(h.q())}};
  std::iota(id.permutations[0].begin(), id.permutations[0].end(), 0u);
  const KeyedView view = apply_key(h, id, 1);
  CHECK(view.values == h.values);
  CHECK(view.counts == h.counts);
  const Bits m = testing::random_message(rng, codec_capacity(h));
  CHECK(perm_encode(x, m, id) == perm_encode(x, m));
}

TEST_CASE("three symbols admit six single-stage keys") {
  const Histogram h = compute_histogram(std::vector<Sample>{0, 1, 1, 2, 2, 2});
  std::set<std::vector<Sample>> orderings;
  std::vector<std::uint32_t> perm{0, 1, 2};
  do {
    const KeyedView view = apply_key(h, StegoKey{{perm}}, 1);
    orderings.insert(view.values);
    std::vector<Sample> sorted = view.values;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == h.values);
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(orderings.size() == 6);
}

TEST_CASE("two-stage key alternates between its orderings") {
  const Histogram h = compute_histogram(std::vector<Sample>{10, 20, 20, 30, 30, 30});
  const StegoKey key{{{2, 0, 1}, {1, 2, 0}}};
  for (std::uint64_t stage = 1; stage <= 6; ++stage) {
    const KeyedView view = apply_key(h, key, stage);
    const auto& perm = key.permutations[stage % 2];
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(view.values[j] == h.values[perm[j]]);
      CHECK(view.counts[j] == h.counts[perm[j]]);
    }
  }
  CHECK_THROWS_AS(apply_key(h, StegoKey{{{0, 1}}}, 1), Error);
}

TEST_CASE("restricted keys keep relative order") {
  const StegoKey key{{{4, 1, 3, 0, 2}}};
  const std::vector<std::size_t> subset{1, 2, 4};
  const StegoKey r = restrict_key(key, subset);
  CHECK(r.permutations[0] == std::vector<std::uint32_t>{2, 0, 1});
}

TEST_CASE("linear and Fenwick count tables agree") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t q = 1 + rng() % 150;
    std::vector<std::uint64_t> counts(q);
    for (auto& c : counts) c = rng() % 6;
    counts[rng() % q] += 1;
    std::vector<std::vector<std::uint32_t>> orderings(1 + rng() % 3, std::vector<std::uint32_t>(q));
    for (auto& o : orderings) {
      std::iota(o.begin(), o.end(), 0u);
      std::shuffle(o.begin(), o.end(), rng);
    }
    detail::CountTable lin(counts, orderings, detail::CountTable::Layout::linear);
    detail::CountTable fen(counts, orderings, detail::CountTable::Layout::fenwick);
    while (lin.total() > 0) {
      REQUIRE(lin.total() == fen.total());
      for (std::size_t o = 0; o < orderings.size(); ++o) {
        const std::uint64_t target = rng() % lin.total();
        CHECK(lin.find(o, target) == fen.find(o, target));
        const std::size_t s = rng() % q;
        CHECK(lin.cumulative_before(o, s) == fen.cumulative_before(o, s));
      }
      const std::size_t sym = lin.find(0, rng() % lin.total());
      lin.decrement(sym);
      fen.decrement(sym);
    }
  }
}

TEST_CASE("large alphabets round-trip through the Fenwick path") {
  std::mt19937_64 rng(23);
  const auto x = testing::random_host(rng, 50'000, 0, 1023);
  const Histogram h = compute_histogram(x);
  REQUIRE(h.q() > detail::kLinearScanLimit);
  const Bits m = testing::random_message(rng, codec_capacity(h));
  const StegoKey key = derive_key("wide", h.q(), 3);
  const auto y = perm_encode(x, m, key);
  CHECK(same_histogram(x, y));
  CHECK(perm_decode(y, key) == m);
}

TEST_CASE("guard bits reduce capacity") {
  const Histogram h = compute_histogram(std::vector<Sample>{1, 2, 3, 4, 4, 4, 4});
  CHECK(codec_capacity(h, CodecOptions{2}) == 5);
  CHECK(codec_capacity(h, CodecOptions{20}) == 0);
}
