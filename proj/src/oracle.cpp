#include "permsteg/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace permsteg::oracle {
namespace {

__extension__ using i128 = __int128;
__extension__ using u128 = unsigned __int128;

BigInt to_big(i128 v) {
  const bool negative = v < 0;
  const u128 u = negative ? -static_cast<u128>(v) : static_cast<u128>(v);
  BigInt out = BigInt(static_cast<std::uint64_t>(u >> 64)) << 64;
  out += static_cast<std::uint64_t>(u);
  return negative ? BigInt(-out) : out;
}

Rational ratio(const BigInt& num, const BigInt& den) { return Rational(num, den); }

std::vector<std::vector<Sample>> parts_of(std::span<const Sample> x, const IndexPartitioning* part) {
  if (part == nullptr) return {std::vector<Sample>(x.begin(), x.end())};
  validate(*part, x.size());
  return gather(x, *part);
}

struct Codeword {
  i128 power;
  std::uint64_t changes;
};

std::vector<Codeword> codewords_of(const std::vector<Sample>& xj, std::uint64_t budget) {
  std::vector<Codeword> out;
  for (const auto& y : enumerate_rearrangements(xj, budget).items) {
    Codeword c{0, 0};
    for (std::size_t i = 0; i < y.size(); ++i) {
      const i128 d = static_cast<i128>(y[i]) - xj[i];
      c.power += d * d;
      c.changes += d != 0;
    }
    out.push_back(c);
  }
  return out;
}

Matrix zero_matrix(std::size_t n) { return Matrix(n, std::vector<Rational>(n, Rational(0))); }

}  // namespace

BigInt factorial(std::uint64_t z) {
  BigInt f = 1;
  for (std::uint64_t i = 2; i <= z; ++i) f *= i;
  return f;
}

BigInt multinomial(std::span<const std::uint64_t> counts) {
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  BigInt r = factorial(n);
  for (auto c : counts) r /= factorial(c);
  return r;
}

RearrangementSet enumerate_rearrangements(std::span<const Sample> x, std::uint64_t budget) {
  const Histogram h = compute_histogram(x);
  RearrangementSet set;
  set.count = multinomial(h.counts);
  if (set.count > budget) throw Error("rearrangement count exceeds the enumeration budget");
  std::vector<Sample> y(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  do {
    set.items.push_back(y);
  } while (std::next_permutation(y.begin(), y.end()));
  return set;
}

ExactMetrics exact_metrics(std::span<const Sample> x, const IndexPartitioning* part,
                           std::uint64_t budget) {
  if (x.empty()) throw Error("empty host");
  const auto parts = parts_of(x, part);
  std::vector<std::vector<Codeword>> lists;
  BigInt r = 1;
  for (const auto& xj : parts) {
    lists.push_back(codewords_of(xj, budget));
    r *= lists.back().size();
    if (r > budget) throw Error("rearrangement count exceeds the enumeration budget");
  }

  BigInt power_sum = 0;
  BigInt power_sq_sum = 0;
  i128 power_max = 0;
  BigInt change_sum = 0;
  std::vector<std::uint64_t> by_changes(x.size() + 1, 0);
  std::vector<std::size_t> digit(lists.size(), 0);
  for (;;) {
    i128 power = 0;
    std::uint64_t changes = 0;
    for (std::size_t j = 0; j < lists.size(); ++j) {
      power += lists[j][digit[j]].power;
      changes += lists[j][digit[j]].changes;
    }
    const BigInt pb = to_big(power);
    power_sum += pb;
    power_sq_sum += pb * pb;
    power_max = std::max(power_max, power);
    change_sum += changes;
    ++by_changes[changes];
    std::size_t j = 0;
    while (j < digit.size() && ++digit[j] == lists[j].size()) digit[j++] = 0;
    if (j == digit.size()) break;
  }

  ExactMetrics m;
  m.r = r;
  const Rational n(static_cast<std::uint64_t>(x.size()));
  m.avg_power = ratio(power_sum, r);
  m.max_power = Rational(to_big(power_max));
  m.nu_bar = ratio(change_sum, r) / n;
  m.power_variance = ratio(power_sq_sum, r) - m.avg_power * m.avg_power;
  m.efficiency_factor = 0;
  for (std::size_t c = 1; c < by_changes.size(); ++c) {
    if (by_changes[c] != 0) m.efficiency_factor += Rational(by_changes[c], c);
  }
  m.efficiency_factor /= Rational(r);
  return m;
}

ClosedForms closed_forms(std::span<const Sample> x, const IndexPartitioning* part) {
  if (x.empty()) throw Error("empty host");
  const auto parts = parts_of(x, part);
  ClosedForms f;
  f.r = 1;
  const BigInt n = static_cast<std::uint64_t>(x.size());
  Rational nu_weighted = 0;
  for (const auto& xj : parts) {
    BigInt sum = 0;
    BigInt energy = 0;
    for (Sample v : xj) {
      sum += v;
      energy += BigInt(v) * v;
    }
    const BigInt nj = static_cast<std::uint64_t>(xj.size());
    f.avg_power += 2 * (Rational(energy) - ratio(sum * sum, nj));

    std::vector<Sample> asc = xj;
    std::sort(asc.begin(), asc.end());
    BigInt cross = 0;
    for (std::size_t i = 0; i < asc.size(); ++i) cross += BigInt(asc[i]) * asc[asc.size() - 1 - i];
    f.max_power += 2 * Rational(energy - cross);

    const Histogram h = compute_histogram(xj);
    BigInt coincidence = 0;
    for (auto c : h.counts) coincidence += BigInt(c) * c;
    nu_weighted += Rational(nj) * (1 - ratio(coincidence, nj * nj));
    f.r *= multinomial(h.counts);
  }
  f.nu_bar = nu_weighted / Rational(n);
  f.power_variance = x.size() >= 2 ? f.avg_power * f.avg_power / Rational(n - 1) : Rational(0);
  if (f.r > 1) {
    const Rational share = ratio(f.r - 1, f.r);
    f.efficiency_floor = share * share / (Rational(n) * f.nu_bar);
  }
  return f;
}

Matrix second_moment_closed_form(std::span<const Sample> x) {
  const std::size_t n = x.size();
  if (n == 0) throw Error("empty host");
  BigInt sum = 0;
  BigInt energy = 0;
  for (Sample v : x) {
    sum += v;
    energy += BigInt(v) * v;
  }
  Rational b = 0;
  if (n >= 2) b = ratio(sum * sum - energy, BigInt(n) * (n - 1));
  const Rational a = ratio(energy, BigInt(n)) - b;
  Matrix m = zero_matrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) m[i][k] = (i == k ? a : Rational(0)) + b;
  }
  return m;
}

Matrix rearrangement_second_moment(std::span<const Sample> x, std::uint64_t budget) {
  const auto set = enumerate_rearrangements(x, budget);
  const std::size_t n = x.size();
  std::vector<std::vector<i128>> acc(n, std::vector<i128>(n, 0));
  for (const auto& y : set.items) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) acc[i][k] += static_cast<i128>(y[i]) * y[k];
    }
  }
  Matrix m = zero_matrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) m[i][k] = ratio(to_big(acc[i][k]), set.count);
  }
  return m;
}

PermutationExpectations permutation_expectations(std::span<const Sample> x) {
  const std::size_t n = x.size();
  if (n == 0) throw Error("empty host");
  if (n > 8) throw Error("permutation enumeration limited to n <= 8");
  std::vector<std::vector<std::uint64_t>> ones(n, std::vector<std::uint64_t>(n, 0));
  std::vector<std::vector<i128>> acc(n, std::vector<i128>(n, 0));
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  std::uint64_t total = 0;
  do {
    ++total;
    for (std::size_t i = 0; i < n; ++i) {
      ++ones[i][sigma[i]];
      for (std::size_t k = 0; k < n; ++k) acc[i][k] += static_cast<i128>(x[sigma[i]]) * x[sigma[k]];
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));

  PermutationExpectations e;
  e.mean_permutation = zero_matrix(n);
  e.second_moment = zero_matrix(n);
  e.mean_permutation_closed = zero_matrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      e.mean_permutation[i][k] = Rational(ones[i][k], total);
      e.second_moment[i][k] = ratio(to_big(acc[i][k]), BigInt(total));
      e.mean_permutation_closed[i][k] = Rational(1, static_cast<std::uint64_t>(n));
    }
  }
  e.second_moment_rearrangements = rearrangement_second_moment(x);
  e.second_moment_closed = second_moment_closed_form(x);
  return e;
}

TableCodecReport table_codec(std::span<const Sample> x, const StegoKey* key, std::uint64_t budget) {
  const Histogram h = compute_histogram(x);
  if (key != nullptr) validate_key(*key, h.q());
  const auto set = enumerate_rearrangements(x, budget);
  TableCodecReport report;
  report.r = set.count;
  report.capacity = codec_capacity(h);
  if (report.capacity >= 63 || (std::uint64_t{1} << report.capacity) > budget) {
    throw Error("message count exceeds the enumeration budget");
  }
  report.messages = std::uint64_t{1} << report.capacity;
  report.coverage = Rational(BigInt(report.messages), set.count);

  std::set<std::vector<Sample>> seen;
  const std::size_t c = report.capacity;
  for (std::uint64_t m = 0; m < report.messages; ++m) {
    Bits bits(c);
    for (std::size_t i = 0; i < c; ++i) bits[i] = static_cast<std::uint8_t>((m >> (c - 1 - i)) & 1u);
    const auto y = perm_encode(h, bits, c, key);
    if (!std::binary_search(set.items.begin(), set.items.end(), y)) report.members = false;
    if (!seen.insert(y).second) report.injective = false;
    if (perm_decode(h, y, c, key) != bits) report.round_trip = false;
  }
  return report;
}

}  // namespace permsteg::oracle
