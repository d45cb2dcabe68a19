#pragma once

// Distortion, rate and efficiency figures for permutation coding of a host,
// optionally partitioned.
//
// Every theoretical quantity depends on the host only through the
// histograms of its partitions. Reports built from a support-induced
// partitioning are therefore identical for any rearrangement of the host.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "permsteg/core.hpp"
#include "permsteg/partition.hpp"

namespace permsteg {

struct PartitionMetrics {
  std::uint64_t n = 0;
  std::size_t q = 0;
  double sum = 0.0;        // x_j^t 1
  double energy = 0.0;     // ||x_j||^2
  double avg_power = 0.0;  // 2 (||x_j||^2 - (x_j^t 1)^2 / n_j)
  double max_power = 0.0;  // 2 (||x_j||^2 - ascending . descending)
  double nu_bar = 0.0;     // 1 - ||h_j||^2 / n_j^2
  double log2_count = 0.0;
  std::uint64_t capacity = 0;
  double entropy = 0.0;  // bits

  // Biased sample variance of x_j.
  double variance() const { return n == 0 ? 0.0 : avg_power / (2.0 * static_cast<double>(n)); }
  bool operator==(const PartitionMetrics&) const = default;
};

PartitionMetrics partition_metrics(const Histogram& h);

struct MetricsReport {
  std::uint64_t n = 0;
  std::size_t q = 0;
  std::size_t p = 0;
  int value_bits = 8;
  std::vector<PartitionMetrics> partitions;

  double energy = 0.0;
  double sum = 0.0;
  double avg_power = 0.0;
  double avg_power_per_element = 0.0;
  double max_power = 0.0;

  // Power ratios, +inf when the corresponding power is zero.
  double xi_bar = 0.0;
  double xi_bar_star = 0.0;
  double xi_min = 0.0;

  double nu_bar = 0.0;

  double log2_count = 0.0;  // sum_j log2 r_j
  double rho = 0.0;         // log2_count / n
  std::uint64_t capacity = 0;
  double rho_emp = 0.0;  // capacity / n

  double entropy = 0.0;              // H(X)
  double conditional_entropy = 0.0;  // H(X|U) = sum_j (n_j/n) H_j
  double zeta = 0.0;

  double rho_u = 0.0;
  double rho_l = 0.0;        // clamped at 0
  double rho_l_prime = 0.0;  // clamped at 0

  double tau = 0.0;
  double nu_bound_tau = 0.0;      // 1 - 1/tau
  double nu_bound_log_tau = 0.0;  // log2(tau) / 2
  double nu_bound_power = 0.0;    // w^2 / n

  std::optional<double> eps_l;             // absent when r = 1
  std::optional<double> eps_l_asymptotic;  // absent when nu_bar = 0

  // Covering sphere of the unpartitioned code.
  double mean = 0.0;
  double covering_radius_sq = 0.0;
  double angle = 0.0;

  // max_j sigma_j^2 / min over nonzero sigma_j^2; 1 when at most one is nonzero.
  double variance_spread = 1.0;

  bool operator==(const MetricsReport&) const = default;
};

// Report from per-partition histograms (one partition = unpartitioned).
MetricsReport analyze(std::span<const Histogram> parts, int value_bits = 8);
MetricsReport analyze(const Histogram& h, const SupportPartitioning& sp, int value_bits = 8);
MetricsReport analyze(const HostSequence& x,
                      const std::optional<IndexPartitioning>& part = std::nullopt);

double avg_watermark_power(const HostSequence& x,
                           const std::optional<IndexPartitioning>& part = std::nullopt);
double max_watermark_power(const HostSequence& x,
                           const std::optional<IndexPartitioning>& part = std::nullopt);

struct PowerRatios {
  double xi_bar = 0.0;
  double xi_bar_star = 0.0;
  double xi_min = 0.0;
};
// Throws Error for an all-zero host.
PowerRatios power_ratios(const HostSequence& x,
                         const std::optional<IndexPartitioning>& part = std::nullopt);

double degree_of_host_change(const HostSequence& x,
                             const std::optional<IndexPartitioning>& part = std::nullopt);

struct EfficiencyBounds {
  std::optional<double> eps_l;
  std::optional<double> eps_l_asymptotic;
};
EfficiencyBounds efficiency_bounds(const HostSequence& x,
                                   const std::optional<IndexPartitioning>& part = std::nullopt);

struct Geometry {
  double mean = 0.0;
  double covering_radius_sq = 0.0;
  double angle = 0.0;  // radians, between x and the all-ones direction
};
// Throws Error for an all-zero host.
Geometry geometry(const HostSequence& x);

// Chebyshev bound on Pr{| ||W||^2 - w^2 | >= gamma w^2}; requires gamma > 0
// and n >= 2.
double chebyshev_bound(double gamma, std::uint64_t n);

// Rate-distortion helpers in bits per element.
double zeta(std::uint64_t q, std::uint64_t n);
double rho_upper(double avg_power_per_element);
double rho_lower(double nu_bar, double zeta_value);
double rho_lower_prime(double nu_bar, double zeta_value);

struct EmpiricalMetrics {
  double power = 0.0;  // ||y - x||^2
  double xi = 0.0;
  double xi_star = 0.0;
  double nu = 0.0;
  std::optional<double> eps;  // absent when nothing changed
};
// Requires y to be a rearrangement of x.
EmpiricalMetrics empirical_metrics(std::span<const Sample> x, std::span<const Sample> y,
                                   double rho_emp, int value_bits = 8);

// Closed forms for a {0,1} host of length n with the given number of ones.
struct BinaryHamming {
  double avg_power = 0.0;
  double max_power = 0.0;
  double xi_bar = 0.0;
  double xi_min = 0.0;
  double nu_bar = 0.0;
  std::optional<double> eps_asymptotic;
};
BinaryHamming binary_hamming(std::uint64_t n, std::uint64_t weight);

double to_db(double linear);

// Flat CSV view of a report; columns match metrics_csv_header().
std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsReport& report);

// "%.12g", with inf and n/a spelled out.
std::string format_number(double v);
std::string format_number(const std::optional<double>& v);

}  // namespace permsteg
