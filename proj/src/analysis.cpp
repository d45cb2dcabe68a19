#include "permsteg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "permsteg/log_count.hpp"

namespace permsteg {
namespace {

__extension__ using i128 = __int128;
constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio_or_inf(double num, double den) { return den == 0.0 ? kInf : num / den; }

double entropy_bits(std::span<const std::uint64_t> counts, std::uint64_t n) {
  if (n == 0) return 0.0;
  const double nd = static_cast<double>(n);
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double cd = static_cast<double>(c);
    h += cd / nd * std::log2(nd / cd);
  }
  return h;
}

// sum_i (a_i - d_i)^2 for the ascending and descending orderings.
i128 ascending_descending_gap(const Histogram& h) {
  i128 total = 0;
  std::size_t lo = 0;
  std::size_t hi = h.q();
  std::uint64_t lo_left = h.q() ? h.counts[0] : 0;
  std::uint64_t hi_left = h.q() ? h.counts[h.q() - 1] : 0;
  std::uint64_t remaining = h.n;
  while (remaining > 0) {
    const std::uint64_t run = std::min(lo_left, hi_left);
    const i128 diff = static_cast<i128>(h.values[hi - 1]) - h.values[lo];
    total += diff * diff * run;
    remaining -= run;
    lo_left -= run;
    hi_left -= run;
    if (lo_left == 0 && ++lo < h.q()) lo_left = h.counts[lo];
    if (hi_left == 0 && --hi > 0) hi_left = h.counts[hi - 1];
  }
  return total;
}

Histogram merge(std::span<const Histogram> parts) {
  std::map<Sample, std::uint64_t> bins;
  for (const auto& h : parts) {
    for (std::size_t k = 0; k < h.q(); ++k) bins[h.values[k]] += h.counts[k];
  }
  Histogram out;
  for (const auto& [v, c] : bins) {
    out.values.push_back(v);
    out.counts.push_back(c);
    out.n += c;
  }
  return out;
}

std::vector<Histogram> histograms_of(const HostSequence& x,
                                     const std::optional<IndexPartitioning>& part) {
  if (part) return partition_histograms(x.samples, *part);
  return {compute_histogram(x)};
}

}  // namespace

PartitionMetrics partition_metrics(const Histogram& h) {
  PartitionMetrics m;
  m.n = h.n;
  m.q = h.q();
  if (h.n == 0) return m;
  long double sum = 0.0L;
  long double energy = 0.0L;
  for (std::size_t k = 0; k < h.q(); ++k) {
    const long double v = h.values[k];
    sum += v * static_cast<long double>(h.counts[k]);
    energy += v * v * static_cast<long double>(h.counts[k]);
  }
  const long double mean = sum / static_cast<long double>(h.n);
  long double centered = 0.0L;
  long double coincidence = 0.0L;
  for (std::size_t k = 0; k < h.q(); ++k) {
    const long double d = h.values[k] - mean;
    const long double c = static_cast<long double>(h.counts[k]);
    centered += c * d * d;
    coincidence += c * c;
  }
  const long double nl = static_cast<long double>(h.n);
  m.sum = static_cast<double>(sum);
  m.energy = static_cast<double>(energy);
  m.avg_power = static_cast<double>(2.0L * centered);
  m.max_power = static_cast<double>(ascending_descending_gap(h));
  m.nu_bar = static_cast<double>(1.0L - coincidence / (nl * nl));
  m.log2_count = log2_multinomial(h.counts);
  m.capacity = capacity_bits(h.counts);
  m.entropy = entropy_bits(h.counts, h.n);
  return m;
}

MetricsReport analyze(std::span<const Histogram> parts, int value_bits) {
  MetricsReport r;
  r.value_bits = value_bits;
  r.p = parts.size();
  const Histogram global = merge(parts);
  r.n = global.n;
  r.q = global.q();
  if (r.n == 0) throw Error("empty host");
  const double nd = static_cast<double>(r.n);

  double min_var = kInf;
  double max_var = 0.0;
  for (const auto& h : parts) {
    PartitionMetrics m = partition_metrics(h);
    r.avg_power += m.avg_power;
    r.max_power += m.max_power;
    r.nu_bar += static_cast<double>(m.n) / nd * m.nu_bar;
    r.log2_count += m.log2_count;
    r.capacity += m.capacity;
    r.conditional_entropy += static_cast<double>(m.n) / nd * m.entropy;
    const double var = m.variance();
    if (var > 0.0) {
      min_var = std::min(min_var, var);
      max_var = std::max(max_var, var);
    }
    r.partitions.push_back(m);
  }
  if (max_var > 0.0) r.variance_spread = max_var / min_var;

  const PartitionMetrics whole = partition_metrics(global);
  r.energy = whole.energy;
  r.sum = whole.sum;
  r.entropy = whole.entropy;
  r.avg_power_per_element = r.avg_power / nd;

  const double peak = std::ldexp(1.0, value_bits) - 1.0;
  r.xi_bar = ratio_or_inf(r.energy, r.avg_power);
  r.xi_bar_star = ratio_or_inf(nd * peak * peak, r.avg_power);
  r.xi_min = ratio_or_inf(r.energy, r.max_power);

  r.rho = r.log2_count / nd;
  r.rho_emp = static_cast<double>(r.capacity) / nd;
  r.zeta = zeta(r.q, r.n);
  r.rho_u = rho_upper(r.avg_power_per_element);
  r.rho_l = rho_lower(r.nu_bar, r.zeta);
  r.rho_l_prime = rho_lower_prime(r.nu_bar, r.zeta);

  r.tau = std::exp2(r.zeta) * std::sqrt(2.0 * std::numbers::pi * std::numbers::e *
                                        (r.avg_power_per_element / 2.0 + 1.0 / 12.0));
  r.nu_bound_tau = 1.0 - 1.0 / r.tau;
  r.nu_bound_log_tau = 0.5 * std::log2(r.tau);
  r.nu_bound_power = r.avg_power_per_element;

  if (r.log2_count > 0.0) {
    const double share = -std::expm1(-r.log2_count * std::numbers::ln2);  // (r - 1) / r
    r.eps_l = share * share * r.rho / r.nu_bar;
  }
  if (r.nu_bar > 0.0) r.eps_l_asymptotic = r.conditional_entropy / r.nu_bar;

  r.mean = whole.sum / nd;
  r.covering_radius_sq = whole.avg_power / 2.0;
  r.angle = std::atan2(std::sqrt(r.covering_radius_sq), whole.sum / std::sqrt(nd));
  return r;
}

MetricsReport analyze(const Histogram& h, const SupportPartitioning& sp, int value_bits) {
  validate(sp, h.q());
  const auto parts = group_histograms(h, sp);
  return analyze(parts, value_bits);
}

MetricsReport analyze(const HostSequence& x, const std::optional<IndexPartitioning>& part) {
  const auto parts = histograms_of(x, part);
  return analyze(parts, x.value_bits);
}

double avg_watermark_power(const HostSequence& x, const std::optional<IndexPartitioning>& part) {
  double total = 0.0;
  for (const auto& h : histograms_of(x, part)) total += partition_metrics(h).avg_power;
  return total;
}

double max_watermark_power(const HostSequence& x, const std::optional<IndexPartitioning>& part) {
  double total = 0.0;
  for (const auto& h : histograms_of(x, part)) total += partition_metrics(h).max_power;
  return total;
}

PowerRatios power_ratios(const HostSequence& x, const std::optional<IndexPartitioning>& part) {
  const MetricsReport r = analyze(x, part);
  if (r.energy == 0.0) throw Error("zero host");
  return {r.xi_bar, r.xi_bar_star, r.xi_min};
}

double degree_of_host_change(const HostSequence& x, const std::optional<IndexPartitioning>& part) {
  return analyze(x, part).nu_bar;
}

EfficiencyBounds efficiency_bounds(const HostSequence& x,
                                   const std::optional<IndexPartitioning>& part) {
  const MetricsReport r = analyze(x, part);
  return {r.eps_l, r.eps_l_asymptotic};
}

Geometry geometry(const HostSequence& x) {
  const MetricsReport r = analyze(x);
  if (r.energy == 0.0) throw Error("zero host");
  return {r.mean, r.covering_radius_sq, r.angle};
}

double chebyshev_bound(double gamma, std::uint64_t n) {
  if (n < 2) throw Error("Chebyshev bound needs n >= 2");
  if (!(gamma > 0.0)) throw Error("Chebyshev bound needs gamma > 0");
  return 1.0 / (gamma * gamma * static_cast<double>(n - 1));
}

double zeta(std::uint64_t q, std::uint64_t n) {
  return static_cast<double>(q) / static_cast<double>(n) * std::log2(static_cast<double>(n) + 1.0);
}

double rho_upper(double avg_power_per_element) {
  return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e *
                         (avg_power_per_element / 2.0 + 1.0 / 12.0));
}

double rho_lower(double nu_bar, double zeta_value) {
  return std::max(0.0, -std::log2(1.0 - nu_bar) - zeta_value);
}

double rho_lower_prime(double nu_bar, double zeta_value) {
  return std::max(0.0, 2.0 * nu_bar - zeta_value);
}

EmpiricalMetrics empirical_metrics(std::span<const Sample> x, std::span<const Sample> y,
                                   double rho_emp, int value_bits) {
  if (x.size() != y.size()) throw Error("stego length differs from host length");
  if (x.empty()) throw Error("empty host");
  if (compute_histogram(x) != compute_histogram(y)) {
    throw Error("stego sequence is not a rearrangement of the host");
  }
  i128 power = 0;
  i128 energy = 0;
  std::uint64_t changed = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const i128 d = static_cast<i128>(y[i]) - x[i];
    power += d * d;
    energy += static_cast<i128>(x[i]) * x[i];
    changed += d != 0;
  }
  const double nd = static_cast<double>(x.size());
  const double peak = std::ldexp(1.0, value_bits) - 1.0;
  EmpiricalMetrics e;
  e.power = static_cast<double>(power);
  e.xi = ratio_or_inf(static_cast<double>(energy), e.power);
  e.xi_star = ratio_or_inf(nd * peak * peak, e.power);
  e.nu = static_cast<double>(changed) / nd;
  if (changed > 0) e.eps = rho_emp / e.nu;
  return e;
}

BinaryHamming binary_hamming(std::uint64_t n, std::uint64_t weight) {
  if (n == 0 || weight > n) throw Error("invalid binary host");
  const double nd = static_cast<double>(n);
  const double w = static_cast<double>(weight);
  const double omega = w / nd;
  BinaryHamming b;
  b.avg_power = 2.0 * w * (1.0 - omega);
  b.max_power = 2.0 * static_cast<double>(std::min(weight, n - weight));
  b.xi_bar = weight == n ? kInf : 1.0 / (2.0 * (1.0 - omega));
  b.xi_min = weight == n ? kInf : 0.5 * std::max(1.0, omega / (1.0 - omega));
  b.nu_bar = 2.0 * omega * (1.0 - omega);
  if (b.nu_bar > 0.0) {
    const double h = -(1.0 - omega) * std::log2(1.0 - omega) - omega * std::log2(omega);
    b.eps_asymptotic = h / b.nu_bar;
  }
  return b;
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_number(const std::optional<double>& v) {
  return v ? format_number(*v) : "n/a";
}

std::string metrics_csv_header() {
  return "n,q,p,capacity,avg_power,avg_power_per_element,max_power,xi_bar,xi_bar_db,"
         "xi_bar_star,xi_bar_star_db,xi_min,xi_min_db,nu_bar,rho,rho_emp,entropy,"
         "conditional_entropy,zeta,rho_u,rho_l,rho_l_prime,nu_bound_tau,nu_bound_log_tau,"
         "nu_bound_power,eps_l,eps_l_asymptotic,mean,covering_radius_sq,angle,variance_spread";
}

std::string metrics_csv_row(const MetricsReport& r) {
  std::ostringstream os;
  os << r.n << ',' << r.q << ',' << r.p << ',' << r.capacity;
  for (double v : {r.avg_power, r.avg_power_per_element, r.max_power, r.xi_bar, to_db(r.xi_bar),
                   r.xi_bar_star, to_db(r.xi_bar_star), r.xi_min, to_db(r.xi_min), r.nu_bar, r.rho,
                   r.rho_emp, r.entropy, r.conditional_entropy, r.zeta, r.rho_u, r.rho_l,
                   r.rho_l_prime, r.nu_bound_tau, r.nu_bound_log_tau, r.nu_bound_power}) {
    os << ',' << format_number(v);
  }
  os << ',' << format_number(r.eps_l) << ',' << format_number(r.eps_l_asymptotic);
  for (double v : {r.mean, r.covering_radius_sq, r.angle, r.variance_spread}) {
    os << ',' << format_number(v);
  }
  return os.str();
}

}  // namespace permsteg
