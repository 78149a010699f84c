#ifndef LINGDIM_GEOMETRY_MANIFOLD_HPP
#define LINGDIM_GEOMETRY_MANIFOLD_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <string>

#include "lingdim/geometry/point_cloud.hpp"
#include "lingdim/random.hpp"

namespace lingdim {

enum class ManifoldKind { hypercube };

struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::hypercube;
  Index intrinsic_dim = 2;
  Index ambient_dim = 3;
  Index n_points = 1000;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// D x d matrix with orthonormal columns, Householder QR of a Gaussian matrix.
inline Eigen::MatrixXd random_orthonormal_columns(Index rows, Index cols, Rng& rng) {
  Eigen::MatrixXd g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

/// Uniform samples on [0,1]^d pushed into R^D by a seeded isometric embedding
/// and translation, plus optional isotropic Gaussian noise.
template <typename Scalar = double>
PointCloud<Scalar> sample_manifold(const ManifoldSpec& spec) {
  if (spec.intrinsic_dim < 1 || spec.intrinsic_dim > spec.ambient_dim) {
    throw ParameterError("need 1 <= intrinsic_dim <= ambient_dim, got d=" +
                         std::to_string(spec.intrinsic_dim) + ", D=" + std::to_string(spec.ambient_dim));
  }
  if (spec.n_points < 0) throw ParameterError("n_points must be nonnegative");
  if (!(spec.noise_sigma >= 0.0)) throw ParameterError("noise_sigma must be nonnegative");

  Rng rng(spec.seed);
  const Eigen::MatrixXd basis = random_orthonormal_columns(spec.ambient_dim, spec.intrinsic_dim, rng);
  Eigen::RowVectorXd shift(spec.ambient_dim);
  for (Index k = 0; k < spec.ambient_dim; ++k) shift(k) = rng.normal();

  RowMatrixXd latent(spec.n_points, spec.intrinsic_dim);
  for (Index i = 0; i < spec.n_points; ++i)
    for (Index k = 0; k < spec.intrinsic_dim; ++k) latent(i, k) = rng.uniform();

  RowMatrixXd embedded = latent * basis.transpose();
  embedded.rowwise() += shift;
  if (spec.noise_sigma > 0.0) {
    for (Index i = 0; i < embedded.rows(); ++i)
      for (Index k = 0; k < embedded.cols(); ++k) embedded(i, k) += spec.noise_sigma * rng.normal();
  }
  return PointCloud<Scalar>(embedded.template cast<Scalar>());
}

/// Random orthogonal D x D matrix and Gaussian shift, for isometry checks.
struct Isometry {
  Eigen::MatrixXd rotation;
  Eigen::RowVectorXd shift;

  template <typename Scalar>
  PointCloud<Scalar> apply(const PointCloud<Scalar>& cloud) const {
    RowMatrixXd moved = cloud.points.template cast<double>() * rotation.transpose();
    moved.rowwise() += shift;
    return PointCloud<Scalar>(moved.template cast<Scalar>(), cloud.labels);
  }
};

inline Isometry random_isometry(Index dim, std::uint64_t seed) {
  Rng rng(seed);
  Isometry iso;
  iso.rotation = random_orthonormal_columns(dim, dim, rng);
  iso.shift.resize(dim);
  for (Index k = 0; k < dim; ++k) iso.shift(k) = rng.normal();
  return iso;
}

}  // namespace lingdim

#endif  // LINGDIM_GEOMETRY_MANIFOLD_HPP
