#include "permsteg/stego.hpp"

#include "permsteg/partition.hpp"

namespace permsteg {
namespace {

struct Plan {
  Selection selection;
  IndexPartitioning part;
  std::optional<StegoKey> key;
  std::uint64_t capacity = 0;
};

Plan plan_for(std::span<const Sample> s, const StegoConfig& config) {
  const Histogram h = compute_histogram(s);
  Plan plan;
  plan.selection = select_partitioning(h, config.constraint, config.value_bits);
  plan.part = support_induced(plan.selection.partitioning, s, h);
  if (config.passphrase) plan.key = derive_key(*config.passphrase, h.q(), config.key_stages);
  for (const auto& hj : group_histograms(h, plan.selection.partitioning)) {
    plan.capacity += codec_capacity(hj, config.codec);
  }
  return plan;
}

}  // namespace

std::uint64_t embedding_capacity(std::span<const Sample> x, const StegoConfig& config) {
  return plan_for(x, config).capacity;
}

EmbedResult embed(std::span<const Sample> x, const Bits& message, const StegoConfig& config) {
  Plan plan = plan_for(x, config);
  if (message.size() > plan.capacity) throw CapacityError(message.size(), plan.capacity);
  EmbedResult result;
  result.stego = partitioned_encode(x, plan.part, message, plan.key, config.codec);
  result.capacity = plan.capacity;
  const double rho_emp = static_cast<double>(plan.capacity) / static_cast<double>(x.size());
  result.empirical = empirical_metrics(x, result.stego, rho_emp, config.value_bits);
  result.selection = std::move(plan.selection);
  return result;
}

ExtractResult extract(std::span<const Sample> y, const StegoConfig& config) {
  Plan plan = plan_for(y, config);
  ExtractResult result;
  result.message = partitioned_decode(y, plan.part, plan.key, config.codec);
  result.capacity = plan.capacity;
  result.selection = std::move(plan.selection);
  return result;
}

}  // namespace permsteg
