#ifndef LINGDIM_GEOMETRY_TWONN_HPP
#define LINGDIM_GEOMETRY_TWONN_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lingdim/geometry/neighbors.hpp"

namespace lingdim {

enum class IdMethod { mle, linear_fit };

std::string to_string(IdMethod m);
IdMethod parse_id_method(const std::string& s);

struct TwoNNOptions {
  IdMethod method = IdMethod::mle;
  /// Fraction of the largest distance ratios left out of the fit.
  double discard_fraction = 0.1;
  bool keep_cdf = false;
};

struct IdEstimate {
  double d = 0.0;
  IdMethod method = IdMethod::mle;
  double discard_fraction = 0.0;
  Index n_used = 0;
  /// (mu, F(mu)) over the sorted ratios, when requested.
  std::optional<std::vector<std::pair<double, double>>> empirical_cdf;
};

/// TwoNN estimate from precomputed distance ratios mu_i = delta2 / delta1.
///
/// Ratios are sorted ascending and the top `discard_fraction` is set aside.
/// mle: the trimmed ratios are treated as right-censored at the largest
///   retained ratio, so d = n_used / (sum_{kept} ln mu + n_cut * ln mu_max_kept).
///   With no discard this is the plain n / sum ln mu.
/// linear_fit: least-squares slope through the origin of -ln(1 - i/N)
///   against ln mu_(i) over the kept ratios, never including i = N.
IdEstimate twonn_from_ratios(const Eigen::VectorXd& mu, const TwoNNOptions& options = {});

/// TwoNN on a deduplicated cloud.
template <typename Scalar>
IdEstimate twonn_id(const PointCloud<Scalar>& cloud, const TwoNNOptions& options = {}) {
  if (!(options.discard_fraction >= 0.0 && options.discard_fraction < 1.0)) {
    throw ParameterError("discard_fraction must lie in [0, 1)");
  }
  return twonn_from_ratios(neighbor_stats(cloud).mu, options);
}

/// Deduplicates at `dedupe_tol`, then runs TwoNN.
template <typename Scalar>
IdEstimate estimate_id(const PointCloud<Scalar>& cloud, const TwoNNOptions& options = {},
                       double dedupe_tol = 0.0) {
  return twonn_id(dedupe(cloud, dedupe_tol).cloud, options);
}

}  // namespace lingdim

#endif  // LINGDIM_GEOMETRY_TWONN_HPP
