#pragma once

// Brute-force ground truth for small hosts. Everything here is exact:
// big integers and rationals only.

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "permsteg/core.hpp"
#include "permsteg/partition.hpp"
#include "permsteg/permcodec.hpp"

namespace permsteg::oracle {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Matrix = std::vector<std::vector<Rational>>;

inline constexpr std::uint64_t kDefaultBudget = 1'000'000;

BigInt factorial(std::uint64_t z);
BigInt multinomial(std::span<const std::uint64_t> counts);

struct RearrangementSet {
  std::vector<std::vector<Sample>> items;  // lexicographic
  BigInt count;
};

// Throws Error when the count exceeds the budget.
RearrangementSet enumerate_rearrangements(std::span<const Sample> x,
                                          std::uint64_t budget = kDefaultBudget);

// Averages over every codeword of (partitioned) permutation coding of x,
// each codeword equally likely.
struct ExactMetrics {
  BigInt r;
  Rational avg_power;
  Rational max_power;
  Rational nu_bar;
  Rational power_variance;
  // Average embedding efficiency is efficiency_factor * log2 r, with
  // changes counted per codeword and the unchanged codeword contributing 0.
  Rational efficiency_factor;
};
ExactMetrics exact_metrics(std::span<const Sample> x, const IndexPartitioning* part = nullptr,
                           std::uint64_t budget = kDefaultBudget);

// The closed-form expressions for the same quantities, evaluated exactly.
struct ClosedForms {
  BigInt r;
  Rational avg_power;     // 2 sum_j (||x_j||^2 - (x_j^t 1)^2 / n_j)
  Rational max_power;     // 2 sum_j (||x_j||^2 - ascending . descending)
  Rational nu_bar;        // sum_j (n_j/n)(1 - ||h_j||^2 / n_j^2)
  Rational power_variance;  // (w^2)^2 / (n - 1), unpartitioned only
  // ((r-1)/r)^2 / (n nu_bar): the efficiency lower bound divided by log2 r.
  // Zero when r = 1.
  Rational efficiency_floor;
};
ClosedForms closed_forms(std::span<const Sample> x, const IndexPartitioning* part = nullptr);

struct PermutationExpectations {
  // Enumerated over all n! permutation matrices.
  Matrix mean_permutation;
  Matrix second_moment;
  // Enumerated over the distinct rearrangements only.
  Matrix second_moment_rearrangements;
  // (1/n) 1 1^t and a I + b 1 1^t.
  Matrix mean_permutation_closed;
  Matrix second_moment_closed;
};
// Requires n <= 8.
PermutationExpectations permutation_expectations(std::span<const Sample> x);

// E{y y^t} over distinct rearrangements y, and the closed form a I + b 1 1^t.
Matrix rearrangement_second_moment(std::span<const Sample> x,
                                   std::uint64_t budget = kDefaultBudget);
Matrix second_moment_closed_form(std::span<const Sample> x);

struct TableCodecReport {
  std::uint64_t capacity = 0;
  std::uint64_t messages = 0;
  bool injective = true;
  bool members = true;     // every codeword is a rearrangement of x
  bool round_trip = true;  // decoding returns the message
  BigInt r;
  Rational coverage;  // 2^c / r
};
TableCodecReport table_codec(std::span<const Sample> x, const StegoKey* key = nullptr,
                             std::uint64_t budget = kDefaultBudget);

}  // namespace permsteg::oracle
