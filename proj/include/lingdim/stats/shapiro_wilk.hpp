#ifndef LINGDIM_STATS_SHAPIRO_WILK_HPP
#define LINGDIM_STATS_SHAPIRO_WILK_HPP

#include <span>

namespace lingdim::stats {

struct ShapiroWilkResult {
  double w = 1.0;
  double p = 1.0;
};

/// Shapiro-Wilk normality test for 3 <= n <= 5000, following Royston's
/// AS R94: polynomial approximations to the coefficients and a normalising
/// transform of 1 - W for the p-value. Throws DegenerateSampleError on a
/// constant sample.
ShapiroWilkResult shapiro_wilk(std::span<const double> sample);

}  // namespace lingdim::stats

#endif  // LINGDIM_STATS_SHAPIRO_WILK_HPP
