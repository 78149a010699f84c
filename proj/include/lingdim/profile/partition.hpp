#ifndef LINGDIM_PROFILE_PARTITION_HPP
#define LINGDIM_PROFILE_PARTITION_HPP

#include <cstdint>
#include <vector>

#include "lingdim/geometry/point_cloud.hpp"

namespace lingdim {

/// Disjoint, equally sized blocks of item indices.
struct PartitionPlan {
  std::vector<std::vector<Index>> parts;
  /// Items left over after floor(n_items / n_parts) per block.
  std::vector<Index> dropped;
  std::uint64_t seed = 0;

  std::size_t n_parts() const { return parts.size(); }
};

/// Seeded shuffle of 0..n_items-1 split into contiguous blocks.
PartitionPlan partition(Index n_items, Index n_parts, std::uint64_t seed);

/// Blocks in input order, no shuffle. For data that is already randomized or
/// laid out block by block on purpose.
PartitionPlan partition_contiguous(Index n_items, Index n_parts);

}  // namespace lingdim

#endif  // LINGDIM_PROFILE_PARTITION_HPP
