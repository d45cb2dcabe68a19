#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "permsteg/experiment.hpp"
#include "permsteg/selector.hpp"
#include "support.hpp"

using namespace permsteg;

namespace {

SelectionConstraint with_kappa(double kappa) {
  SelectionConstraint c;
  c.kappa = kappa;
  return c;
}

}  // namespace

TEST_CASE("a constraint below the floor keeps the host unpartitioned") {
  std::mt19937_64 rng(1);
  const HostSequence x{testing::random_host(rng, 1000, 0, 255)};
  const Selection s = select_partitioning(x, with_kappa(0.1));
  CHECK(s.requested_p == 1);
  CHECK(s.effective_p() == 1);
  CHECK(s.report.rho == doctest::Approx(analyze(x).rho).epsilon(1e-15));
}

TEST_CASE("an extreme constraint forces singleton groups") {
  std::mt19937_64 rng(2);
  const HostSequence x{testing::random_host(rng, 1000, 0, 30)};
  const Histogram h = compute_histogram(x);
  const Selection s = select_partitioning(x, with_kappa(1e12));
  CHECK(s.requested_p == h.q());
  CHECK(s.effective_p() == h.q());
  CHECK(s.report.rho == 0.0);
  CHECK(std::isinf(s.report.xi_bar));
}

TEST_CASE("tighter constraints never raise the rate on a Gaussian host") {
  const HostSequence x{gaussian_host(100'000, 42)};
  double last_rate = std::numeric_limits<double>::infinity();
  for (double db = -3.0; db <= 60.0; db += 3.0) {
    const double kappa = std::pow(10.0, db / 10.0);
    const Selection s = select_partitioning(x, with_kappa(kappa));
    CHECK(s.report.xi_bar >= kappa);
    CHECK(s.selection_rate <= last_rate);
    last_rate = s.selection_rate;
  }
  CHECK(last_rate == 0.0);
}

TEST_CASE("gapped supports are always feasible") {
  const HostSequence x{{0, 1, 1, 2, 40, 41, 41, 900, 901}};
  CHECK(std::isinf(select_partitioning(x, with_kappa(1e15)).report.xi_bar));
}

TEST_CASE("binary hosts fall back to zero rate") {
  const HostSequence x{{0, 1, 1, 0, 1, 0, 0, 0}};
  CHECK(select_partitioning(x, with_kappa(0.5)).requested_p == 1);
  const Selection tight = select_partitioning(x, with_kappa(100.0));
  CHECK(tight.requested_p == 2);
  CHECK(tight.report.capacity == 0);
}

TEST_CASE("ties go to the first candidate") {
  // Constant host: every p gives zero rate and infinite ratio.
  const HostSequence x{{4, 4, 4}};
  CHECK(select_partitioning(x, with_kappa(1.0)).requested_p == 1);
}

TEST_CASE("fixed pairing candidate") {
  const HostSequence x{{0, 1, 2, 3, 3, 2, 1, 0, 4}};
  SelectionConstraint c = with_kappa(1.0);
  c.sequence = SequenceFamily::lsb;
  const Selection s = select_partitioning(x, c);
  CHECK(s.partitioning.groups == std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}, {4}});
  c.kappa = 1e9;
  CHECK_THROWS_AS(select_partitioning(x, c), InfeasibleError);
}

TEST_CASE("explicit groups") {
  const HostSequence x{{0, 0, 1, 5, 5, 6}};
  SelectionConstraint c = with_kappa(5.0);
  c.sequence = SequenceFamily::explicit_groups;
  CHECK_THROWS_AS(select_partitioning(x, c), Error);
  c.groups = SupportPartitioning{{{0, 1}, {2, 3}}};
  const Selection s = select_partitioning(x, c);
  CHECK(s.report.capacity == 2);
}

TEST_CASE("non-positive kappa is rejected") {
  const HostSequence x{{1, 2}};
  CHECK_THROWS_AS(select_partitioning(x, with_kappa(0.0)), Error);
  CHECK_THROWS_AS(select_partitioning(x, with_kappa(-1.0)), Error);
}

TEST_CASE("encoder and decoder agree on every rearrangement") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const HostSequence x{testing::random_host(rng, 2 + rng() % 500, 0, 1 + static_cast<Sample>(rng() % 255))};
    const SelectionConstraint c = with_kappa(std::pow(10.0, static_cast<double>(rng() % 400) / 10.0 / 10.0));
    CHECK(verify_blind_agreement(x, x.samples, c));
    std::vector<Sample> reversed(x.samples.rbegin(), x.samples.rend());
    CHECK(verify_blind_agreement(x, reversed, c));
    std::vector<Sample> y = x.samples;
    std::shuffle(y.begin(), y.end(), rng);
    CHECK(verify_blind_agreement(x, y, c));
  }
  const HostSequence x{{1, 2, 3}};
  CHECK_THROWS_AS(verify_blind_agreement(x, std::vector<Sample>{1, 2, 2}, with_kappa(1.0)), Error);
}

TEST_CASE("kappa parsing") {
  CHECK(parse_kappa("20") == 20.0);
  CHECK(parse_kappa("0.5") == 0.5);
  CHECK(parse_kappa("20db") == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(parse_kappa("13dB") == doctest::Approx(std::pow(10.0, 1.3)).epsilon(1e-14));
  CHECK_THROWS_AS(parse_kappa("abc"), Error);
  CHECK_THROWS_AS(parse_kappa("0"), Error);
  CHECK_THROWS_AS(parse_kappa("5x"), Error);
  CHECK(parse_sequence_family("lsb") == SequenceFamily::lsb);
  CHECK_THROWS_AS(parse_sequence_family("gray"), Error);
}

TEST_CASE("variance spread is reported") {
  const HostSequence x{gaussian_host(50'000, 7)};
  const Selection s = select_partitioning(x, with_kappa(100.0));
  CHECK(s.effective_p() > 1);
  CHECK(s.report.variance_spread >= 1.0);
}
