#include "lingdim/stats/ablation.hpp"

#include <map>
#include <unordered_map>

namespace lingdim::stats {

namespace {

using BaselineIndex = std::unordered_map<std::string, std::pair<std::size_t, std::int64_t>>;

BaselineIndex index_baseline(const std::vector<AblationRecord>& baseline) {
  BaselineIndex idx;
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    const auto& r = baseline[i];
    if (r.ablated_layer) {
      throw ValidationError("baseline record '" + r.sentence_id + "' carries an ablated layer");
    }
    if (r.predicted_token_id < 0) throw ValidationError("negative token id for '" + r.sentence_id + "'");
    if (!idx.emplace(r.sentence_id, std::make_pair(i, r.predicted_token_id)).second) {
      throw ValidationError("duplicate baseline record '" + r.sentence_id + "'");
    }
  }
  return idx;
}

struct Hit {
  std::size_t baseline_pos;
  bool match;
};

// Ablated records grouped by layer, each resolved against the baseline.
std::map<int, std::vector<Hit>> resolve(const BaselineIndex& idx, const std::vector<AblationRecord>& ablated) {
  std::map<int, std::vector<Hit>> by_layer;
  for (const auto& r : ablated) {
    if (!r.ablated_layer) throw ValidationError("ablated record '" + r.sentence_id + "' has no layer");
    if (r.predicted_token_id < 0) throw ValidationError("negative token id for '" + r.sentence_id + "'");
    const auto it = idx.find(r.sentence_id);
    if (it == idx.end()) {
      throw AlignmentError("sentence '" + r.sentence_id + "' (layer " + std::to_string(*r.ablated_layer) +
                           ") has no baseline prediction");
    }
    by_layer[*r.ablated_layer].push_back({it->second.first, it->second.second == r.predicted_token_id});
  }
  return by_layer;
}

}  // namespace

std::vector<LayerAccuracy> ablation_accuracy(const std::vector<AblationRecord>& baseline,
                                             const std::vector<AblationRecord>& ablated) {
  const auto by_layer = resolve(index_baseline(baseline), ablated);
  std::vector<LayerAccuracy> out;
  for (const auto& [layer, hits] : by_layer) {
    LayerAccuracy acc;
    acc.layer = layer;
    acc.n_sentences = hits.size();
    for (const auto& h : hits) acc.n_matching += h.match ? 1 : 0;
    acc.accuracy = static_cast<double>(acc.n_matching) / static_cast<double>(acc.n_sentences);
    out.push_back(acc);
  }
  return out;
}

LayerProfile ablation_profile(const std::vector<AblationRecord>& baseline,
                              const std::vector<AblationRecord>& ablated, const PartitionPlan& plan) {
  const auto by_layer = resolve(index_baseline(baseline), ablated);
  std::vector<std::size_t> part_of(baseline.size(), SIZE_MAX);
  for (std::size_t p = 0; p < plan.parts.size(); ++p) {
    for (Index i : plan.parts[p]) {
      if (i < 0 || static_cast<std::size_t>(i) >= baseline.size()) {
        throw AlignmentError("partition index " + std::to_string(i) + " out of range");
      }
      part_of[static_cast<std::size_t>(i)] = p;
    }
  }
  std::vector<int> layers;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> counts;  // [layer][part] = (match, total)
  for (const auto& [layer, hits] : by_layer) {
    layers.push_back(layer);
    auto& c = counts.emplace_back(plan.n_parts(), std::make_pair(std::size_t{0}, std::size_t{0}));
    for (const auto& h : hits) {
      const std::size_t p = part_of[h.baseline_pos];
      if (p == SIZE_MAX) continue;
      c[p].first += h.match ? 1 : 0;
      c[p].second += 1;
    }
  }
  LayerProfile prof = profile_over_partitions(
      "ablation_accuracy", layers, plan.n_parts(), [&](std::size_t l, std::size_t p) {
        const auto [match, total] = counts[l][p];
        if (total == 0) throw AlignmentError("no ablated records fall in this partition");
        return static_cast<double>(match) / static_cast<double>(total);
      });
  return prof;
}

}  // namespace lingdim::stats
