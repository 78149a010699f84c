#include "lingdim/geometry/twonn.hpp"

#include <algorithm>
#include <cmath>

namespace lingdim {

std::string to_string(IdMethod m) { return m == IdMethod::mle ? "mle" : "linear_fit"; }

IdMethod parse_id_method(const std::string& s) {
  if (s == "mle") return IdMethod::mle;
  if (s == "linear_fit" || s == "linear-fit") return IdMethod::linear_fit;
  throw ParameterError("unknown ID method '" + s + "' (expected mle or linear_fit)");
}

IdEstimate twonn_from_ratios(const Eigen::VectorXd& mu, const TwoNNOptions& options) {
  const double f = options.discard_fraction;
  if (!(f >= 0.0 && f < 1.0)) throw ParameterError("discard_fraction must lie in [0, 1)");
  const Index n = mu.size();
  if (n < 3) throw EstimatorInputError("TwoNN needs at least 3 points, got " + std::to_string(n));

  std::vector<double> sorted(mu.data(), mu.data() + n);
  for (double m : sorted) {
    if (!(m >= 1.0) || !std::isfinite(m)) {
      throw ValidationError("distance ratios must be finite and >= 1");
    }
  }
  std::sort(sorted.begin(), sorted.end());

  // The 1e-12 guard keeps e.g. (1 - 0.1) * 10 from flooring to 8.
  const auto n_keep = static_cast<Index>(std::floor((1.0 - f) * static_cast<double>(n) + 1e-12));
  if (n_keep < 3) {
    throw EstimatorInputError("discard fraction leaves " + std::to_string(n_keep) +
                              " points; need at least 3");
  }

  IdEstimate est;
  est.method = options.method;
  est.discard_fraction = f;
  est.n_used = n_keep;

  // Sums run over the sorted ratios, so the result does not depend on point order.
  if (options.method == IdMethod::mle) {
    double log_sum = 0.0;
    for (Index i = 0; i < n_keep; ++i) log_sum += std::log(sorted[static_cast<std::size_t>(i)]);
    log_sum += static_cast<double>(n - n_keep) * std::log(sorted[static_cast<std::size_t>(n_keep - 1)]);
    if (!(log_sum > 0.0)) {
      throw DegenerateGeometryError("all distance ratios equal 1; TwoNN is undefined");
    }
    est.d = static_cast<double>(n_keep) / log_sum;
  } else {
    const Index n_fit = std::min(n_keep, n - 1);
    if (n_fit < 3) throw EstimatorInputError("linear fit needs at least 4 points");
    double sxx = 0.0;
    double sxy = 0.0;
    for (Index i = 0; i < n_fit; ++i) {
      const double x = std::log(sorted[static_cast<std::size_t>(i)]);
      const double y = -std::log1p(-static_cast<double>(i + 1) / static_cast<double>(n));
      sxx += x * x;
      sxy += x * y;
    }
    if (!(sxx > 0.0)) {
      throw DegenerateGeometryError("all distance ratios equal 1; TwoNN is undefined");
    }
    est.n_used = n_fit;
    est.d = sxy / sxx;
  }
  if (!(est.d > 0.0) || !std::isfinite(est.d)) {
    throw DegenerateGeometryError("TwoNN produced a non-positive dimension");
  }

  if (options.keep_cdf) {
    std::vector<std::pair<double, double>> cdf;
    cdf.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      cdf.emplace_back(sorted[i], static_cast<double>(i + 1) / static_cast<double>(n));
    }
    est.empirical_cdf = std::move(cdf);
  }
  return est;
}

}  // namespace lingdim
