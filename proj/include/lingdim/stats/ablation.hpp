#ifndef LINGDIM_STATS_ABLATION_HPP
#define LINGDIM_STATS_ABLATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lingdim/profile/profile.hpp"

namespace lingdim::stats {

/// Next-token prediction for one sentence; no ablated_layer means the intact model.
struct AblationRecord {
  std::string sentence_id;
  std::optional<int> ablated_layer;
  std::int64_t predicted_token_id = 0;
};

struct LayerAccuracy {
  int layer = 0;
  std::size_t n_sentences = 0;
  std::size_t n_matching = 0;
  double accuracy = 0.0;
};

/// Fraction of sentences whose ablated prediction equals the intact one, per
/// ablated layer (ascending). Every ablated sentence needs a baseline record.
std::vector<LayerAccuracy> ablation_accuracy(const std::vector<AblationRecord>& baseline,
                                             const std::vector<AblationRecord>& ablated);

/// Accuracy profile with mean and standard error over partitions of the
/// baseline sentences (in baseline order).
LayerProfile ablation_profile(const std::vector<AblationRecord>& baseline,
                              const std::vector<AblationRecord>& ablated, const PartitionPlan& plan);

}  // namespace lingdim::stats

#endif  // LINGDIM_STATS_ABLATION_HPP
