#pragma once

// Logarithms of rearrangement counts r = n! / (h_1! ... h_q!).
//
// Two flavours are provided. log2_multinomial() is an accurate estimate used
// for theoretical rates. log_multinomial() is the conservative value that
// drives embedding capacity: exact for n <= 20, otherwise a Robbins-bound
// underestimate that can never overstate how many messages fit.

#include <cstdint>
#include <optional>
#include <span>

#include "permsteg/core.hpp"

namespace permsteg {

// Interval registers of the permutation coder hold this many bits.
inline constexpr int kCoderPrecisionBits = 62;

// Largest n for which factorials are evaluated exactly (20! < 2^64).
inline constexpr std::uint64_t kExactFactorialLimit = 20;

struct LogCount {
  double value = 0.0;  // log2 r, or a strict underestimate when !exact
  bool exact = true;
};

struct RobbinsBracket {
  double lower = 0.0;  // log2 of the Robbins lower bound on z!
  double upper = 0.0;  // log2 of the Robbins upper bound on z!
};

// Robbins' two-sided bound on z! for z >= 1, as base-2 logarithms.
RobbinsBracket robbins_log2_factorial(std::uint64_t z);

// log2 z!, exact table up to 20, Stirling series with four correction terms
// beyond (absolute error far below double resolution).
double log2_factorial(std::uint64_t z);

// r as an integer when n <= kExactFactorialLimit; zero counts are ignored.
std::optional<std::uint64_t> exact_multinomial(std::span<const std::uint64_t> counts);

// Accurate log2 r for theoretical quantities.
double log2_multinomial(std::span<const std::uint64_t> counts);

LogCount log_multinomial(std::span<const std::uint64_t> counts);
inline LogCount log_multinomial(const Histogram& h) { return log_multinomial(h.counts); }

// Upper bound on the relative deviation between a finite-precision coder
// interval and its exact length 1/r, for a host with n samples over q values.
double coder_width_error_bound(std::uint64_t n, std::uint64_t q);

// Number of message bits a host with these counts can carry without
// ambiguity: floor(log2 r) whenever that is provably decodable by the
// finite-precision coder, never more.
std::uint64_t capacity_bits(std::span<const std::uint64_t> counts);
inline std::uint64_t capacity_bits(const Histogram& h) { return capacity_bits(h.counts); }

}  // namespace permsteg
