#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "permsteg/analysis.hpp"
#include "permsteg/experiment.hpp"

using namespace permsteg;

namespace {

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("splitmix64 reference values") {
  // First outputs of the reference generator seeded with 0.
  std::uint64_t state = 0;
  auto next = [&] {
    const std::uint64_t out = splitmix64(state);
    state += 0x9e3779b97f4a7c15ull;
    return out;
  };
  CHECK(next() == 0xe220a8397b1dcdafull);
  CHECK(next() == 0x6e789e6aa1b965f4ull);
  CHECK(next() == 0x06c45d188009454full);
}

TEST_CASE("binary hosts have the requested weight") {
  const auto x = binary_host(1000, 0.3, 5);
  CHECK(std::count(x.begin(), x.end(), 1) == 300);
  CHECK(std::count(x.begin(), x.end(), 0) == 700);
  CHECK(binary_host(1000, 0.3, 5) == x);
  CHECK(binary_host(1000, 0.3, 6) != x);
  CHECK_THROWS_AS(binary_host(10, 1.5, 1), Error);
}

TEST_CASE("Gaussian hosts stay in range with the requested moments") {
  const auto x = gaussian_host(200'000, 3);
  CHECK(*std::min_element(x.begin(), x.end()) >= 0);
  CHECK(*std::max_element(x.begin(), x.end()) <= 255);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double var = 0.0;
  for (Sample v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  CHECK(mean == doctest::Approx(128.0).epsilon(0.002));
  CHECK(std::sqrt(var) == doctest::Approx(25.0).epsilon(0.01));
  CHECK(gaussian_host(1000, 3) == gaussian_host(1000, 3));
}

TEST_CASE("random bits are reproducible") {
  CHECK(random_bits(100, 9) == random_bits(100, 9));
  CHECK(random_bits(100, 9) != random_bits(100, 10));
  const Bits b = random_bits(64, 1);
  CHECK(Bits(b.begin(), b.begin() + 10) == Bits(random_bits(10, 1)));
}

TEST_CASE("default grids") {
  const auto g2 = default_grid("fig2");
  CHECK(g2.size() == 19);
  CHECK(g2.front() == doctest::Approx(0.05));
  CHECK(g2.back() == doctest::Approx(0.95));
  CHECK(default_grid("fig3").size() == 256);
  CHECK(default_grid("lsb").empty());
  CHECK_THROWS_AS(default_grid("fig9"), Error);
}

TEST_CASE("binary sweep on a small host") {
  ExperimentConfig cfg;
  cfg.n = 20'000;
  cfg.grid = {0.1, 0.5, 0.9};
  const auto rows = run_fig2(cfg);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.rho_emp <= r.rho);
    CHECK(r.xi_min >= r.xi_bar / 2);
    CHECK(r.rho < r.rho_u);
  }
  CHECK(rows[1].weight == 10'000);
  CHECK(rows[1].xi_bar == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(rows[1].eps_emp);
  CHECK(*rows[1].eps_emp == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("partition sweep on a small host") {
  ExperimentConfig cfg;
  cfg.id = "fig3";
  cfg.n = 20'000;
  cfg.grid = {1, 2, 16, 256};
  const auto rows = run_fig3(cfg);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(r.rho_emp <= r.rho);
    CHECK(r.rho <= r.entropy + 1e-12);
    CHECK(r.rho < r.rho_u);
  }
  CHECK(rows[0].xi_bar < rows[2].xi_bar);
  CHECK(rows[3].rho == 0.0);
  CHECK(rows[3].nu_bar == 0.0);
  CHECK_THROWS_AS(run_fig3(ExperimentConfig{"fig3", 100, 1, {1.5}, 1}), Error);
}

TEST_CASE("static pairing on a small host") {
  ExperimentConfig cfg;
  cfg.id = "lsb";
  cfg.n = 50'000;
  const PartitionRow r = run_lsb(cfg);
  CHECK(r.avg_power_per_element == doctest::Approx(0.5).epsilon(0.02));
  CHECK(r.rho_emp == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("CSV output is independent of thread count") {
  ExperimentConfig cfg;
  cfg.n = 5000;
  cfg.grid = {0.2, 0.4, 0.6};
  cfg.threads = 1;
  const std::string one = run_experiment(cfg);
  cfg.threads = 3;
  CHECK(run_experiment(cfg) == one);
  CHECK(line_count(one) == 4);

  cfg.id = "fig3";
  cfg.grid = {1, 3, 8};
  cfg.threads = 1;
  const std::string three = run_experiment(cfg);
  cfg.threads = 4;
  CHECK(run_experiment(cfg) == three);
  CHECK(three.rfind("p,p_effective,rho_theory,", 0) == 0);

  cfg.id = "lsb";
  CHECK(line_count(run_experiment(cfg)) == 2);
  cfg.id = "nope";
  CHECK_THROWS_AS(run_experiment(cfg), Error);
  CHECK_THROWS_AS(run_experiment(ExperimentConfig{"fig2", 1, 1, {}, 1}), Error);
}
