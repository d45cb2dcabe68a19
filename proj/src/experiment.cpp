#include "permsteg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "permsteg/analysis.hpp"
#include "permsteg/partition.hpp"
#include "permsteg/permcodec.hpp"

namespace permsteg {
namespace {

constexpr std::uint64_t kHostStream = 1;
constexpr std::uint64_t kMessageStream = 2;

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
  return splitmix64(splitmix64(seed + splitmix64(index + 1)) + stream);
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

PartitionRow partition_row(std::span<const Sample> x, const Histogram& h, std::size_t requested_p,
                           const SupportPartitioning& sp, std::uint64_t message_seed) {
  const MetricsReport report = analyze(h, sp);
  const IndexPartitioning part = support_induced(sp, x, h);
  const Bits message = random_bits(report.capacity, message_seed);
  const auto y = partitioned_encode(x, part, message);
  if (partitioned_decode(y, part) != message) throw Error("experiment round trip failed");
  const EmpiricalMetrics emp = empirical_metrics(x, y, report.rho_emp);

  PartitionRow row;
  row.p = requested_p;
  row.p_effective = sp.p();
  row.entropy = report.entropy;
  row.rho = report.conditional_entropy;
  row.rho_emp = report.rho_emp;
  row.rho_u = report.rho_u;
  row.rho_l = report.rho_l;
  row.rho_l_prime = report.rho_l_prime;
  row.avg_power_per_element = report.avg_power_per_element;
  row.xi_bar = report.xi_bar;
  row.xi_emp = emp.xi;
  row.xi_bar_star = report.xi_bar_star;
  row.xi_min = report.xi_min;
  row.eps_l = report.eps_l;
  row.eps_emp = emp.eps;
  row.nu_bar = report.nu_bar;
  row.nu_emp = emp.nu;
  return row;
}

void check_config(const ExperimentConfig& cfg) {
  if (cfg.n < 2) throw Error("experiment needs n >= 2");
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::vector<Sample> binary_host(std::uint64_t n, double omega, std::uint64_t seed) {
  if (!(omega >= 0.0 && omega <= 1.0)) throw Error("Hamming weight fraction outside [0, 1]");
  const auto weight = static_cast<std::uint64_t>(std::llround(omega * static_cast<double>(n)));
  std::vector<Sample> x(n, 0);
  std::fill(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(weight), 1);
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = n; i > 1; --i) std::swap(x[i - 1], x[uniform_below(rng, i)]);
  return x;
}

std::vector<Sample> gaussian_host(std::uint64_t n, std::uint64_t seed, double mean, double sd,
                                  Sample lo, Sample hi) {
  const boost::math::normal_distribution<double> dist(mean, sd);
  std::mt19937_64 rng(seed);
  std::vector<Sample> x;
  x.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    // 53 random bits, centred in their cell so u lies strictly inside (0, 1).
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    const double v = std::nearbyint(boost::math::quantile(dist, u));
    x.push_back(static_cast<Sample>(std::clamp(v, static_cast<double>(lo), static_cast<double>(hi))));
  }
  return x;
}

Bits random_bits(std::uint64_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Bits bits(count);
  std::uint64_t word = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    if (i % 64 == 0) word = rng();
    bits[i] = static_cast<std::uint8_t>((word >> (63 - i % 64)) & 1u);
  }
  return bits;
}

std::vector<double> default_grid(const std::string& id) {
  std::vector<double> grid;
  if (id == "fig2") {
    for (int k = 1; k <= 19; ++k) grid.push_back(k * 0.05);
  } else if (id == "fig3") {
    for (int p = 1; p <= 256; ++p) grid.push_back(p);
  } else if (id != "lsb") {
    throw Error("unknown experiment: " + id);
  }
  return grid;
}

std::vector<BinaryRow> run_fig2(const ExperimentConfig& cfg) {
  check_config(cfg);
  const auto grid = cfg.grid.empty() ? default_grid("fig2") : cfg.grid;
  std::vector<BinaryRow> rows(grid.size());
  parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
    const auto x = binary_host(cfg.n, grid[i], point_seed(cfg.seed, i, kHostStream));
    const Histogram h = compute_histogram(x);
    const std::vector<Histogram> parts{h};
    const MetricsReport report = analyze(parts);
    const Bits message = random_bits(report.capacity, point_seed(cfg.seed, i, kMessageStream));
    const auto y = perm_encode(h, message, report.capacity, nullptr);
    if (perm_decode(h, y, report.capacity, nullptr) != message) {
      throw Error("experiment round trip failed");
    }
    const EmpiricalMetrics emp = empirical_metrics(x, y, report.rho_emp);
    BinaryRow& row = rows[i];
    row.omega = grid[i];
    row.weight = static_cast<std::uint64_t>(std::count(x.begin(), x.end(), 1));
    row.entropy = report.entropy;
    row.rho = report.conditional_entropy;
    row.rho_emp = report.rho_emp;
    row.xi_bar = report.xi_bar;
    row.xi_emp = emp.xi;
    row.xi_min = report.xi_min;
    row.rho_u = report.rho_u;
    row.rho_l_prime = report.rho_l_prime;
    row.eps_l = report.eps_l;
    row.eps_emp = emp.eps;
  });
  return rows;
}

std::vector<PartitionRow> run_fig3(const ExperimentConfig& cfg) {
  check_config(cfg);
  const auto grid = cfg.grid.empty() ? default_grid("fig3") : cfg.grid;
  std::vector<std::size_t> ps;
  for (double g : grid) {
    if (!(g >= 1.0) || g != std::floor(g)) throw Error("fig3 grid values must be integers >= 1");
    ps.push_back(static_cast<std::size_t>(g));
  }
  const auto x = gaussian_host(cfg.n, splitmix64(cfg.seed));
  const Histogram h = compute_histogram(x);
  std::vector<PartitionRow> rows(ps.size());
  parallel_for(ps.size(), cfg.threads, [&](std::size_t i) {
    rows[i] = partition_row(x, h, ps[i], centroid_partitioning(h.values, ps[i]),
                            point_seed(cfg.seed, i, kMessageStream));
  });
  return rows;
}

PartitionRow run_lsb(const ExperimentConfig& cfg) {
  check_config(cfg);
  const auto x = gaussian_host(cfg.n, splitmix64(cfg.seed));
  const Histogram h = compute_histogram(x);
  const SupportPartitioning sp = lsb_pairing(h.q());
  return partition_row(x, h, sp.p(), sp, point_seed(cfg.seed, 0, kMessageStream));
}

std::string fig2_csv(const std::vector<BinaryRow>& rows) {
  std::ostringstream os;
  os << "omega,rho_theory,rho_emp,xi_bar_db,xi_emp_db,xi_min_db,rho_u,rho_l_prime,eps_l,eps_emp\n";
  for (const auto& r : rows) {
    os << format_number(r.omega) << ',' << format_number(r.rho) << ',' << format_number(r.rho_emp)
       << ',' << format_number(to_db(r.xi_bar)) << ',' << format_number(to_db(r.xi_emp)) << ','
       << format_number(to_db(r.xi_min)) << ',' << format_number(r.rho_u) << ','
       << format_number(r.rho_l_prime) << ',' << format_number(r.eps_l) << ','
       << format_number(r.eps_emp) << '\n';
  }
  return os.str();
}

std::string partition_csv(const std::vector<PartitionRow>& rows) {
  std::ostringstream os;
  os << "p,p_effective,rho_theory,rho_emp,rho_u,rho_l,rho_l_prime,xi_bar_db,xi_emp_db,"
        "xi_bar_star_db,xi_min_db,eps_l,eps_emp,nu_bar,nu_emp\n";
  for (const auto& r : rows) {
    os << r.p << ',' << r.p_effective << ',' << format_number(r.rho) << ','
       << format_number(r.rho_emp) << ',' << format_number(r.rho_u) << ','
       << format_number(r.rho_l) << ',' << format_number(r.rho_l_prime) << ','
       << format_number(to_db(r.xi_bar)) << ',' << format_number(to_db(r.xi_emp)) << ','
       << format_number(to_db(r.xi_bar_star)) << ',' << format_number(to_db(r.xi_min)) << ','
       << format_number(r.eps_l) << ',' << format_number(r.eps_emp) << ','
       << format_number(r.nu_bar) << ',' << format_number(r.nu_emp) << '\n';
  }
  return os.str();
}

std::string run_experiment(const ExperimentConfig& cfg) {
  if (cfg.id == "fig2") return fig2_csv(run_fig2(cfg));
  if (cfg.id == "fig3") return partition_csv(run_fig3(cfg));
  if (cfg.id == "lsb") return partition_csv({run_lsb(cfg)});
  throw Error("unknown experiment: " + cfg.id);
}

}  // namespace permsteg
