#ifndef LINGDIM_GEOMETRY_POINT_CLOUD_HPP
#define LINGDIM_GEOMETRY_POINT_CLOUD_HPP

#include <Eigen/Dense>

#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "lingdim/error.hpp"

namespace lingdim {

using Index = Eigen::Index;

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using RowMatrixXd = RowMatrix<double>;
using RowMatrixXf = RowMatrix<float>;

/// N x D representation vectors, one row per item, with optional row labels.
template <typename Scalar>
struct PointCloud {
  RowMatrix<Scalar> points;
  std::vector<std::string> labels;

  PointCloud() = default;
  explicit PointCloud(RowMatrix<Scalar> p, std::vector<std::string> l = {})
      : points(std::move(p)), labels(std::move(l)) {}

  Index n_points() const { return points.rows(); }
  Index ambient_dim() const { return points.cols(); }
  bool has_labels() const { return !labels.empty(); }

  /// Throws ValidationError on non-finite entries or bad labels.
  void validate() const {
    if (!points.allFinite()) {
      throw ValidationError("point cloud contains NaN or Inf entries");
    }
    if (!labels.empty()) {
      if (static_cast<Index>(labels.size()) != n_points()) {
        throw ValidationError("label count " + std::to_string(labels.size()) +
                              " does not match point count " + std::to_string(n_points()));
      }
      std::unordered_set<std::string> seen;
      for (const auto& l : labels) {
        if (!seen.insert(l).second) throw ValidationError("duplicate label '" + l + "'");
      }
    }
  }

  /// Rows `rows` in the given order, labels carried along.
  PointCloud subset(std::span<const Index> rows) const {
    PointCloud out;
    out.points.resize(static_cast<Index>(rows.size()), ambient_dim());
    for (std::size_t k = 0; k < rows.size(); ++k) out.points.row(static_cast<Index>(k)) = points.row(rows[k]);
    if (has_labels()) {
      out.labels.reserve(rows.size());
      for (Index r : rows) out.labels.push_back(labels[static_cast<std::size_t>(r)]);
    }
    return out;
  }

  template <typename Other>
  PointCloud<Other> cast() const {
    return PointCloud<Other>(points.template cast<Other>(), labels);
  }
};

using PointCloudf = PointCloud<float>;
using PointCloudd = PointCloud<double>;

}  // namespace lingdim

#endif  // LINGDIM_GEOMETRY_POINT_CLOUD_HPP
