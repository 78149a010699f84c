#ifndef LINGDIM_PROFILE_PROFILE_HPP
#define LINGDIM_PROFILE_PROFILE_HPP

#include <string>
#include <utility>
#include <vector>

#include "lingdim/geometry/imbalance.hpp"
#include "lingdim/geometry/twonn.hpp"
#include "lingdim/profile/partition.hpp"

namespace lingdim {

/// Per-layer mean and standard error of one scalar metric over partitions.
struct LayerProfile {
  std::string metric_name;
  std::string model;
  std::string dataset;
  std::string condition;
  std::vector<int> layers;
  std::vector<double> mean;
  std::vector<double> se;
  int n_partitions = 0;
  /// False when n_partitions == 1; se is then reported as all zeros.
  bool se_defined = false;

  std::size_t size() const { return layers.size(); }
  /// Throws ValidationError if lengths, ordering or se signs are off.
  void validate() const;
};

/// Mean and standard error (sample sd / sqrt(n)) of per-partition values.
/// A single value yields se = 0.
std::pair<double, double> mean_and_se(const std::vector<double>& values);

/// Evaluates `metric(layer_position, partition_index)` for every layer and
/// partition and folds the results into a profile. Failures are rethrown as
/// MetricError carrying the layer index and partition.
template <typename Metric>
LayerProfile profile_over_partitions(std::string metric_name, const std::vector<int>& layers,
                                     std::size_t n_partitions, Metric&& metric) {
  if (n_partitions == 0) throw ParameterError("need at least one partition");
  LayerProfile prof;
  prof.metric_name = std::move(metric_name);
  prof.layers = layers;
  prof.n_partitions = static_cast<int>(n_partitions);
  prof.se_defined = n_partitions > 1;
  std::vector<double> values(n_partitions);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (std::size_t p = 0; p < n_partitions; ++p) {
      try {
        values[p] = metric(l, p);
      } catch (const MetricError&) {
        throw;
      } catch (const Error& e) {
        throw MetricError(e, layers[l], static_cast<int>(p));
      }
    }
    const auto [m, s] = mean_and_se(values);
    prof.mean.push_back(m);
    prof.se.push_back(s);
  }
  prof.validate();
  return prof;
}

/// One point cloud per layer, all describing the same items in the same order.
template <typename Scalar>
struct LayerCloud {
  int layer = 0;
  PointCloud<Scalar> cloud;
};

template <typename Scalar>
void check_layer_alignment(const std::vector<LayerCloud<Scalar>>& layers) {
  if (layers.empty()) throw AlignmentError("no layers supplied");
  const auto& ref = layers.front().cloud;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& c = layers[l].cloud;
    if (c.n_points() != ref.n_points()) {
      throw AlignmentError("layer " + std::to_string(layers[l].layer) + " has " +
                           std::to_string(c.n_points()) + " points, expected " +
                           std::to_string(ref.n_points()));
    }
    if (c.labels != ref.labels) {
      throw AlignmentError("layer " + std::to_string(layers[l].layer) + " label order differs");
    }
    if (l > 0 && layers[l].layer <= layers[l - 1].layer) {
      throw AlignmentError("layer indices must be strictly increasing");
    }
  }
}

template <typename Scalar>
std::vector<int> layer_indices(const std::vector<LayerCloud<Scalar>>& layers) {
  std::vector<int> out;
  for (const auto& l : layers) out.push_back(l.layer);
  return out;
}

/// TwoNN profile: each partition is deduplicated at `dedupe_tol` and estimated.
template <typename Scalar>
LayerProfile id_profile(const std::vector<LayerCloud<Scalar>>& layers, const PartitionPlan& plan,
                        const TwoNNOptions& options = {}, double dedupe_tol = 0.0) {
  check_layer_alignment(layers);
  for (const auto& part : plan.parts)
    for (Index i : part)
      if (i < 0 || i >= layers.front().cloud.n_points())
        throw AlignmentError("partition index " + std::to_string(i) + " out of range");
  return profile_over_partitions(
      "twonn_id", layer_indices(layers), plan.n_parts(), [&](std::size_t l, std::size_t p) {
        const auto sub = layers[l].cloud.subset(plan.parts[p]);
        return estimate_id(sub, options, dedupe_tol).d;
      });
}

/// Information imbalance profiles in both directions, layer by layer.
/// Rows duplicated in either space are dropped jointly before the ranks.
template <typename Scalar>
std::pair<LayerProfile, LayerProfile> imbalance_profiles(const std::vector<LayerCloud<Scalar>>& a,
                                                         const std::vector<LayerCloud<Scalar>>& b,
                                                         const PartitionPlan& plan,
                                                         double dedupe_tol = 0.0) {
  check_layer_alignment(a);
  check_layer_alignment(b);
  if (layer_indices(a) != layer_indices(b)) throw AlignmentError("A and B cover different layers");
  for (std::size_t l = 0; l < a.size(); ++l) check_paired(a[l].cloud, b[l].cloud);

  std::vector<ImbalanceResult> cache(a.size() * plan.n_parts());
  auto compute = [&](std::size_t l, std::size_t p) -> const ImbalanceResult& {
    auto& slot = cache[l * plan.n_parts() + p];
    if (slot.n_points == 0) {
      const RowMatrixXd pa = a[l].cloud.subset(plan.parts[p]).points.template cast<double>();
      const RowMatrixXd pb = b[l].cloud.subset(plan.parts[p]).points.template cast<double>();
      const auto rows = joint_dedupe_rows(pa, pb, dedupe_tol);
      if (static_cast<Index>(rows.size()) == pa.rows()) {
        slot = info_imbalance_impl(pa, pb);
      } else {
        slot = info_imbalance_impl(pa(rows, Eigen::all), pb(rows, Eigen::all));
      }
    }
    return slot;
  };
  const auto layers = layer_indices(a);
  LayerProfile ab = profile_over_partitions("info_imbalance_ab", layers, plan.n_parts(),
                                            [&](std::size_t l, std::size_t p) { return compute(l, p).delta_ab; });
  LayerProfile ba = profile_over_partitions("info_imbalance_ba", layers, plan.n_parts(),
                                            [&](std::size_t l, std::size_t p) { return compute(l, p).delta_ba; });
  return {std::move(ab), std::move(ba)};
}

}  // namespace lingdim

#endif  // LINGDIM_PROFILE_PROFILE_HPP
