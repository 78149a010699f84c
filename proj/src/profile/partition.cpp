#include "lingdim/profile/partition.hpp"

#include <numeric>

#include "lingdim/random.hpp"

namespace lingdim {

namespace {

std::vector<Index> identity_order(Index n_items, Index n_parts) {
  if (n_parts < 1) throw ParameterError("need at least one partition");
  if (n_items < n_parts) {
    throw ParameterError("cannot split " + std::to_string(n_items) + " items into " +
                         std::to_string(n_parts) + " partitions");
  }
  std::vector<Index> order(static_cast<std::size_t>(n_items));
  std::iota(order.begin(), order.end(), Index{0});
  return order;
}

PartitionPlan split_blocks(const std::vector<Index>& order, Index n_parts, std::uint64_t seed) {
  const Index block = static_cast<Index>(order.size()) / n_parts;
  PartitionPlan plan;
  plan.seed = seed;
  for (Index p = 0; p < n_parts; ++p) {
    auto first = order.begin() + p * block;
    plan.parts.emplace_back(first, first + block);
  }
  plan.dropped.assign(order.begin() + n_parts * block, order.end());
  return plan;
}

}  // namespace

PartitionPlan partition(Index n_items, Index n_parts, std::uint64_t seed) {
  auto order = identity_order(n_items, n_parts);
  Rng rng(seed);
  rng.shuffle(order);
  return split_blocks(order, n_parts, seed);
}

PartitionPlan partition_contiguous(Index n_items, Index n_parts) {
  return split_blocks(identity_order(n_items, n_parts), n_parts, 0);
}

}  // namespace lingdim
