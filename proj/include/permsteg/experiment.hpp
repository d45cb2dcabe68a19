#pragma once

// Reproducible sweeps over binary and Gaussian hosts, written as CSV.
//
// Every random draw comes from mt19937_64 generators seeded from the
// configured seed. Per-point generators are seeded by splitmix64 of the
// seed and the grid index, so results do not depend on thread scheduling.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "permsteg/core.hpp"

namespace permsteg {

struct ExperimentConfig {
  std::string id = "fig2";  // fig2 | fig3 | lsb
  std::uint64_t n = 1'000'000;
  std::uint64_t seed = 1;
  std::vector<double> grid;  // empty: default grid for the experiment
  unsigned threads = 0;      // 0: hardware concurrency
};

struct BinaryRow {
  double omega = 0.0;
  std::uint64_t weight = 0;
  double entropy = 0.0;
  double rho = 0.0;
  double rho_emp = 0.0;
  double xi_bar = 0.0;
  double xi_emp = 0.0;
  double xi_min = 0.0;
  double rho_u = 0.0;
  double rho_l_prime = 0.0;
  std::optional<double> eps_l;
  std::optional<double> eps_emp;
};

struct PartitionRow {
  std::size_t p = 0;            // requested
  std::size_t p_effective = 0;  // nonempty groups
  double entropy = 0.0;
  double rho = 0.0;
  double rho_emp = 0.0;
  double rho_u = 0.0;
  double rho_l = 0.0;
  double rho_l_prime = 0.0;
  double avg_power_per_element = 0.0;
  double xi_bar = 0.0;
  double xi_emp = 0.0;
  double xi_bar_star = 0.0;
  double xi_min = 0.0;
  std::optional<double> eps_l;
  std::optional<double> eps_emp;
  double nu_bar = 0.0;
  double nu_emp = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

// round(omega n) ones at uniformly shuffled positions.
std::vector<Sample> binary_host(std::uint64_t n, double omega, std::uint64_t seed);

// Inverse-CDF Gaussian draws, rounded to the nearest integer and clamped.
std::vector<Sample> gaussian_host(std::uint64_t n, std::uint64_t seed, double mean = 128.0,
                                  double sd = 25.0, Sample lo = 0, Sample hi = 255);

Bits random_bits(std::uint64_t count, std::uint64_t seed);

std::vector<double> default_grid(const std::string& id);

std::vector<BinaryRow> run_fig2(const ExperimentConfig& cfg);
std::vector<PartitionRow> run_fig3(const ExperimentConfig& cfg);
PartitionRow run_lsb(const ExperimentConfig& cfg);

std::string fig2_csv(const std::vector<BinaryRow>& rows);
std::string partition_csv(const std::vector<PartitionRow>& rows);

// Runs the configured experiment and returns its CSV text.
std::string run_experiment(const ExperimentConfig& cfg);

}  // namespace permsteg
