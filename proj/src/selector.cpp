#include "permsteg/selector.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace permsteg {
namespace {

Selection evaluate(const Histogram& h, std::size_t requested_p, SupportPartitioning sp,
                   int value_bits) {
  Selection s;
  s.requested_p = requested_p;
  s.report = analyze(h, sp, value_bits);
  s.selection_rate = s.report.conditional_entropy;
  s.partitioning = std::move(sp);
  return s;
}

Selection single_candidate(const Histogram& h, SupportPartitioning sp, double kappa,
                           int value_bits) {
  const std::size_t p = sp.p();
  Selection s = evaluate(h, p, std::move(sp), value_bits);
  if (!(s.report.xi_bar >= kappa)) throw InfeasibleError("infeasible constraint");
  return s;
}

}  // namespace

Selection select_partitioning(const Histogram& h, const SelectionConstraint& c, int value_bits) {
  validate(h);
  if (!(c.kappa > 0.0)) throw Error("kappa must be positive");
  switch (c.sequence) {
    case SequenceFamily::lsb:
      return single_candidate(h, lsb_pairing(h.q()), c.kappa, value_bits);
    case SequenceFamily::explicit_groups:
      if (!c.groups) throw Error("explicit sequence needs a support partitioning");
      validate(*c.groups, h.q());
      return single_candidate(h, *c.groups, c.kappa, value_bits);
    case SequenceFamily::uniform:
      break;
  }
  std::optional<Selection> best;
  for (std::size_t p = 1; p <= h.q(); ++p) {
    Selection s = evaluate(h, p, uniform_support_sequence(h.values, p), value_bits);
    if (!(s.report.xi_bar >= c.kappa)) continue;
    if (!best || s.selection_rate > best->selection_rate) best = std::move(s);
  }
  if (!best) throw InfeasibleError("infeasible constraint");
  return *best;
}

Selection select_partitioning(const HostSequence& x, const SelectionConstraint& c) {
  return select_partitioning(compute_histogram(x), c, x.value_bits);
}

bool verify_blind_agreement(const HostSequence& x, std::span<const Sample> y,
                            const SelectionConstraint& c) {
  const Histogram hx = compute_histogram(x);
  const Histogram hy = compute_histogram(y);
  if (hx != hy) throw Error("histogram mismatch");
  const Selection sx = select_partitioning(hx, c, x.value_bits);
  const Selection sy = select_partitioning(hy, c, x.value_bits);
  if (!(sx == sy)) return false;
  // The induced position partitionings must also yield identical reports.
  const auto px = partition_histograms(x.samples, support_induced(sx.partitioning, x.samples, hx));
  const auto py = partition_histograms(y, support_induced(sy.partitioning, y, hy));
  return analyze(px, x.value_bits) == analyze(py, x.value_bits);
}

double parse_kappa(const std::string& text) {
  std::string s = text;
  bool db = false;
  if (s.size() >= 2) {
    const std::string tail = s.substr(s.size() - 2);
    if (std::tolower(static_cast<unsigned char>(tail[0])) == 'd' &&
        std::tolower(static_cast<unsigned char>(tail[1])) == 'b') {
      db = true;
      s.resize(s.size() - 2);
    }
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error("invalid kappa: " + text);
  }
  if (used != s.size()) throw Error("invalid kappa: " + text);
  if (db) v = std::pow(10.0, v / 10.0);
  if (!(v > 0.0)) throw Error("kappa must be positive");
  return v;
}

SequenceFamily parse_sequence_family(const std::string& text) {
  if (text == "uniform") return SequenceFamily::uniform;
  if (text == "lsb") return SequenceFamily::lsb;
  throw Error("unknown partitioning sequence: " + text);
}

}  // namespace permsteg
