#ifndef LINGDIM_GEOMETRY_IMBALANCE_HPP
#define LINGDIM_GEOMETRY_IMBALANCE_HPP

#include "lingdim/geometry/neighbors.hpp"

namespace lingdim {

struct ImbalanceResult {
  double delta_ab = 0.0;  // Delta(A -> B)
  double delta_ba = 0.0;  // Delta(B -> A)
  Index n_points = 0;
};

/// Information imbalance between two paired clouds (row i of `a` and row i of
/// `b` describe the same item):
///   Delta(A -> B) = 2 / N^2 * sum_i rank_B(i, nn_A(i)).
ImbalanceResult info_imbalance_impl(const RowMatrixXd& a, const RowMatrixXd& b);

template <typename ScalarA, typename ScalarB>
void check_paired(const PointCloud<ScalarA>& a, const PointCloud<ScalarB>& b) {
  a.validate();
  b.validate();
  if (a.n_points() != b.n_points()) {
    throw PairingError("paired clouds differ in size: " + std::to_string(a.n_points()) + " vs " +
                       std::to_string(b.n_points()));
  }
  if (a.has_labels() && b.has_labels() && a.labels != b.labels) {
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
      if (a.labels[i] != b.labels[i]) {
        throw PairingError("row " + std::to_string(i) + " is '" + a.labels[i] + "' in A but '" +
                           b.labels[i] + "' in B");
      }
    }
  }
}

template <typename ScalarA, typename ScalarB>
ImbalanceResult info_imbalance(const PointCloud<ScalarA>& a, const PointCloud<ScalarB>& b) {
  check_paired(a, b);
  return info_imbalance_impl(a.points.template cast<double>(), b.points.template cast<double>());
}

/// Row indices to keep so that neither cloud retains a duplicate (distance
/// <= tol to an earlier kept row, in either space).
std::vector<Index> joint_dedupe_rows(const RowMatrixXd& a, const RowMatrixXd& b, double tol);

}  // namespace lingdim

#endif  // LINGDIM_GEOMETRY_IMBALANCE_HPP
