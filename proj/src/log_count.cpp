#include "permsteg/log_count.hpp"

#include <array>
#include <bit>
#include <cfloat>
#include <cmath>
#include <numbers>

namespace permsteg {
namespace {

// Bound on rounding in the double evaluation of a log count, which scales
// with the magnitude of its terms: the value plus the n-dependent corrections.
double rounding_allowance(double value, std::uint64_t n, std::uint64_t q) {
  return 64.0 * DBL_EPSILON *
         (std::fabs(value) + std::log2(static_cast<double>(n)) * static_cast<double>(q) + 8.0);
}

constexpr std::array<std::uint64_t, 21> kFactorials = [] {
  std::array<std::uint64_t, 21> f{};
  f[0] = 1;
  for (std::uint64_t i = 1; i < f.size(); ++i) f[i] = f[i - 1] * i;
  return f;
}();

constexpr double kLn2 = std::numbers::ln2;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

RobbinsBracket robbins_log2_factorial(std::uint64_t z) {
  if (z == 0) return {0.0, 0.0};
  const double zd = static_cast<double>(z);
  const double base = 0.5 * std::log(kTwoPi * zd) + zd * std::log(zd) - zd;
  return {(base + 1.0 / (12.0 * zd + 1.0)) / kLn2, (base + 1.0 / (12.0 * zd)) / kLn2};
}

double log2_factorial(std::uint64_t z) {
  if (z <= kExactFactorialLimit) return std::log2(static_cast<double>(kFactorials[z]));
  const double zd = static_cast<double>(z);
  const double inv = 1.0 / zd;
  const double inv2 = inv * inv;
  const double series =
      inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
  return (zd * std::log(zd) - zd + 0.5 * std::log(kTwoPi * zd) + series) / kLn2;
}

std::optional<std::uint64_t> exact_multinomial(std::span<const std::uint64_t> counts) {
  std::uint64_t n = 0;
  for (auto h : counts) n += h;
  if (n > kExactFactorialLimit) return std::nullopt;
  std::uint64_t r = kFactorials[n];
  for (auto h : counts) r /= kFactorials[h];
  return r;
}

double log2_multinomial(std::span<const std::uint64_t> counts) {
  if (auto r = exact_multinomial(counts)) return std::log2(static_cast<double>(*r));
  std::uint64_t n = 0;
  for (auto h : counts) n += h;
  // n log n - sum h log h is evaluated as sum h log(n/h) to avoid cancellation.
  const double nd = static_cast<double>(n);
  double main = 0.0;
  double corr = log2_factorial(n) - (nd * std::log2(nd) - nd / kLn2);
  for (auto h : counts) {
    if (h == 0) continue;
    const double hd = static_cast<double>(h);
    main += hd * std::log2(nd / hd);
    corr -= log2_factorial(h) - (hd * std::log2(hd) - hd / kLn2);
  }
  return main + corr;
}

LogCount log_multinomial(std::span<const std::uint64_t> counts) {
  if (auto r = exact_multinomial(counts)) {
    return {std::log2(static_cast<double>(*r)), true};
  }
  std::uint64_t n = 0;
  for (auto h : counts) n += h;
  const double nd = static_cast<double>(n);
  // Robbins lower bound on n! over upper bounds on each h!; the z^z and e^-z
  // factors are folded into sum h log(n/h).
  double value = 0.5 * std::log2(kTwoPi * nd) + 1.0 / ((12.0 * nd + 1.0) * kLn2);
  std::uint64_t q = 0;
  for (auto h : counts) {
    if (h == 0) continue;
    const double hd = static_cast<double>(h);
    value += hd * std::log2(nd / hd) - 0.5 * std::log2(kTwoPi * hd) - 1.0 / (12.0 * hd * kLn2);
    ++q;
  }
  // The Robbins gap alone can fall below double resolution.
  return {value - rounding_allowance(value, n, q), false};
}

double coder_width_error_bound(std::uint64_t n, std::uint64_t q) {
  if (n <= 1) return 0.0;
  // Each coding stage perturbs the chosen subinterval by at most one register
  // unit, i.e. a relative error below total / (range * count) with
  // range > 2^(P-2). Summed over a whole host this is at most
  // n * sum_k H(h_k) <= n q (1 + ln n) units of 2^-(P-2).
  const double nd = static_cast<double>(n);
  const double units = nd * static_cast<double>(q) * (1.0 + std::log(nd));
  return std::expm1(std::ldexp(units, -(kCoderPrecisionBits - 2)));
}

std::uint64_t capacity_bits(std::span<const std::uint64_t> counts) {
  std::uint64_t n = 0;
  std::uint64_t q = 0;
  for (auto h : counts) {
    n += h;
    q += h > 0;
  }
  const double width_error = coder_width_error_bound(n, q);
  if (auto r = exact_multinomial(counts)) {
    if (*r <= 1) return 0;
    std::uint64_t c = static_cast<std::uint64_t>(std::bit_width(*r)) - 1;
    const std::uint64_t pow = std::uint64_t{1} << c;
    // A power-of-two count is reproduced exactly by the coder. Otherwise
    // every coder interval must stay below 2^-c, which needs
    // (r - 2^c) / r to exceed the precision loss.
    if (*r != pow) {
      const double slack = static_cast<double>(*r - pow) / static_cast<double>(*r);
      if (slack <= 2.0 * width_error) --c;
    }
    return c;
  }
  const LogCount lc = log_multinomial(counts);
  const double margin = 1e-6 + 2.0 * std::log1p(width_error) / kLn2;
  const double floored = std::floor(lc.value - margin);
  return floored <= 0.0 ? 0 : static_cast<std::uint64_t>(floored);
}

}  // namespace permsteg
