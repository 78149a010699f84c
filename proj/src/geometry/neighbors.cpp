#include "lingdim/geometry/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lingdim {

double exact_squared_distance(const double* a, const double* b, Index dim) {
  double s = 0.0;
  for (Index k = 0; k < dim; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

ExactNeighborSearch::ExactNeighborSearch(RowMatrixXd points, Index block_rows)
    : points_(std::move(points)), block_rows_(std::max<Index>(1, block_rows)) {
  const Eigen::RowVectorXd mean = points_.colwise().mean();
  centred_ = points_.rowwise() - mean;
  norms_ = centred_.rowwise().squaredNorm();
  // Covers the Gram-product rounding, the centring rounding and the rounding of
  // the exact sum itself, all of order dim * eps * (|x|^2 + |y|^2).
  tau_ = 8.0 * static_cast<double>(dim() + 8) * std::numeric_limits<double>::epsilon();
}

double ExactNeighborSearch::distance(Index i, Index j) const {
  return std::sqrt(exact_squared_distance(points_.row(i).data(), points_.row(j).data(), dim()));
}

template <typename Visitor>
void ExactNeighborSearch::for_each_block(Visitor&& visit) const {
  const Index n = size();
  Eigen::MatrixXd approx;
  for (Index r0 = 0; r0 < n; r0 += block_rows_) {
    const Index rows = std::min(block_rows_, n - r0);
    approx.noalias() = -2.0 * centred_.middleRows(r0, rows) * centred_.transpose();
    approx.colwise() += norms_.segment(r0, rows);
    approx.rowwise() += norms_.transpose();
    visit(r0, rows, approx);
  }
}

NeighborStats ExactNeighborSearch::two_nearest() const {
  const Index n = size();
  if (n < 3) throw EstimatorInputError("need at least 3 points, got " + std::to_string(n));
  NeighborStats out;
  out.nn1.resize(static_cast<std::size_t>(n));
  out.nn2.resize(static_cast<std::size_t>(n));
  out.delta1.resize(n);
  out.delta2.resize(n);
  out.mu.resize(n);

  std::vector<std::pair<double, Index>> candidates;
  for_each_block([&](Index r0, Index rows, const Eigen::MatrixXd& approx) {
    for (Index b = 0; b < rows; ++b) {
      const Index i = r0 + b;
      // Second smallest upper bound over k != i.
      double u1 = std::numeric_limits<double>::infinity();
      double u2 = u1;
      for (Index k = 0; k < n; ++k) {
        if (k == i) continue;
        const double upper = approx(b, k) + error_bound(i, k);
        if (upper < u1) {
          u2 = u1;
          u1 = upper;
        } else if (upper < u2) {
          u2 = upper;
        }
      }
      candidates.clear();
      for (Index k = 0; k < n; ++k) {
        if (k == i) continue;
        if (approx(b, k) - error_bound(i, k) <= u2) {
          candidates.emplace_back(
              exact_squared_distance(points_.row(i).data(), points_.row(k).data(), dim()), k);
        }
      }
      std::partial_sort(candidates.begin(), candidates.begin() + 2, candidates.end());
      const auto ui = static_cast<std::size_t>(i);
      out.nn1[ui] = candidates[0].second;
      out.nn2[ui] = candidates[1].second;
      out.delta1(i) = std::sqrt(candidates[0].first);
      out.delta2(i) = std::sqrt(candidates[1].first);
      out.mu(i) = out.delta2(i) / out.delta1(i);
    }
  });
  return out;
}

std::vector<Index> ExactNeighborSearch::ranks_of(std::span<const Index> targets) const {
  const Index n = size();
  if (static_cast<Index>(targets.size()) != n) {
    throw ParameterError("ranks_of needs one target per point");
  }
  std::vector<Index> ranks(static_cast<std::size_t>(n));
  for_each_block([&](Index r0, Index rows, const Eigen::MatrixXd& approx) {
    for (Index b = 0; b < rows; ++b) {
      const Index i = r0 + b;
      const Index j = targets[static_cast<std::size_t>(i)];
      if (j == i || j < 0 || j >= n) throw ParameterError("rank target must be another point");
      const double* xi = points_.row(i).data();
      const double target = exact_squared_distance(xi, points_.row(j).data(), dim());
      Index rank = 1;
      for (Index k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double a = approx(b, k);
        const double e = error_bound(i, k);
        if (a + e < target) {
          ++rank;
        } else if (a - e <= target) {
          const double dk = exact_squared_distance(xi, points_.row(k).data(), dim());
          if (dk < target || (dk == target && k < j)) ++rank;
        }
      }
      ranks[static_cast<std::size_t>(i)] = rank;
    }
  });
  return ranks;
}

std::vector<std::vector<Index>> ExactNeighborSearch::earlier_within(double tol) const {
  const Index n = size();
  const double tol2 = tol * tol;
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(n));
  for_each_block([&](Index r0, Index rows, const Eigen::MatrixXd& approx) {
    for (Index b = 0; b < rows; ++b) {
      const Index i = r0 + b;
      for (Index k = 0; k < i; ++k) {
        if (approx(b, k) - error_bound(i, k) > tol2) continue;
        const double d2 = exact_squared_distance(points_.row(i).data(), points_.row(k).data(), dim());
        if (std::sqrt(d2) <= tol) out[static_cast<std::size_t>(i)].push_back(k);
      }
    }
  });
  return out;
}

NeighborStats neighbor_stats_impl(const RowMatrixXd& points) {
  if (points.rows() < 3) {
    throw EstimatorInputError("need at least 3 points, got " + std::to_string(points.rows()));
  }
  NeighborStats stats = ExactNeighborSearch(points).two_nearest();
  for (Index i = 0; i < stats.size(); ++i) {
    if (!(stats.delta1(i) > 0.0)) {
      throw DegenerateGeometryError("point " + std::to_string(i) +
                                    " has a zero-distance duplicate; deduplicate first");
    }
  }
  return stats;
}

std::vector<Index> dedupe_removals(const RowMatrixXd& points, double tol) {
  if (points.rows() == 0) return {};
  const auto close = ExactNeighborSearch(points).earlier_within(tol);
  std::vector<char> kept(close.size(), 1);
  std::vector<Index> removed;
  for (std::size_t i = 0; i < close.size(); ++i) {
    for (Index k : close[i]) {
      if (kept[static_cast<std::size_t>(k)]) {
        kept[i] = 0;
        removed.push_back(static_cast<Index>(i));
        break;
      }
    }
  }
  return removed;
}

}  // namespace lingdim
