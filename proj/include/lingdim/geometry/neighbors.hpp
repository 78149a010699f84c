#ifndef LINGDIM_GEOMETRY_NEIGHBORS_HPP
#define LINGDIM_GEOMETRY_NEIGHBORS_HPP

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "lingdim/geometry/point_cloud.hpp"

namespace lingdim {

/// First and second nearest neighbours of every point.
struct NeighborStats {
  std::vector<Index> nn1;
  std::vector<Index> nn2;
  Eigen::VectorXd delta1;
  Eigen::VectorXd delta2;
  Eigen::VectorXd mu;  // delta2 / delta1

  Index size() const { return static_cast<Index>(nn1.size()); }
};

/// Squared Euclidean distance summed left to right in double precision.
/// Every reported distance in the library goes through this one routine, so
/// results do not depend on the blocking or vectorisation of the search.
double exact_squared_distance(const double* a, const double* b, Index dim);

/// Exact brute-force neighbour queries over a fixed cloud.
///
/// Candidate distances come from blocked Gram products on a centred copy
/// (||x||^2 + ||y||^2 - 2 x.y); every comparison whose outcome is not certain
/// under a rounding-error bound on those products is re-evaluated with
/// exact_squared_distance. Answers are therefore identical to an exhaustive
/// scan with ties broken by the lower point index.
class ExactNeighborSearch {
 public:
  explicit ExactNeighborSearch(RowMatrixXd points, Index block_rows = 256);

  Index size() const { return points_.rows(); }
  Index dim() const { return points_.cols(); }

  /// Requires at least three points.
  NeighborStats two_nearest() const;

  /// Neighbour rank of `targets[i]` as seen from point i: 1 + the number of
  /// other points strictly closer, or equally close with a lower index.
  std::vector<Index> ranks_of(std::span<const Index> targets) const;

  /// For each point, the earlier points within distance `tol` of it.
  std::vector<std::vector<Index>> earlier_within(double tol) const;

  double distance(Index i, Index j) const;

 private:
  template <typename Visitor>
  void for_each_block(Visitor&& visit) const;

  double error_bound(Index i, Index k) const { return tau_ * (norms_(i) + norms_(k)); }

  RowMatrixXd points_;
  RowMatrixXd centred_;
  Eigen::VectorXd norms_;
  Index block_rows_;
  double tau_;
};

NeighborStats neighbor_stats_impl(const RowMatrixXd& points);

/// Two nearest neighbours of every point in a deduplicated cloud (N >= 3).
template <typename Scalar>
NeighborStats neighbor_stats(const PointCloud<Scalar>& cloud) {
  cloud.validate();
  return neighbor_stats_impl(cloud.points.template cast<double>());
}

template <typename Scalar>
struct DedupeResult {
  PointCloud<Scalar> cloud;
  std::vector<Index> kept;
  std::vector<Index> removed;
};

std::vector<Index> dedupe_removals(const RowMatrixXd& points, double tol);

/// Drops every point within `tol` of an earlier retained point. The first
/// occurrence survives and the order of survivors is preserved.
template <typename Scalar>
DedupeResult<Scalar> dedupe(const PointCloud<Scalar>& cloud, double tol = 0.0) {
  cloud.validate();
  if (tol < 0.0) throw ParameterError("dedupe tolerance must be nonnegative");
  DedupeResult<Scalar> out;
  out.removed = dedupe_removals(cloud.points.template cast<double>(), tol);
  std::size_t r = 0;
  for (Index i = 0; i < cloud.n_points(); ++i) {
    if (r < out.removed.size() && out.removed[r] == i) {
      ++r;
    } else {
      out.kept.push_back(i);
    }
  }
  if (out.kept.size() < 3) {
    throw EstimatorInputError("only " + std::to_string(out.kept.size()) +
                              " distinct points remain after deduplication; need at least 3");
  }
  out.cloud = out.removed.empty() ? cloud : cloud.subset(out.kept);
  return out;
}

}  // namespace lingdim

#endif  // LINGDIM_GEOMETRY_NEIGHBORS_HPP
