#include "lingdim/profile/profile.hpp"

#include <algorithm>
#include <cmath>

namespace lingdim {

void LayerProfile::validate() const {
  if (mean.size() != layers.size() || se.size() != layers.size()) {
    throw ValidationError("profile '" + metric_name + "': layers, mean and se lengths differ");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (i > 0 && layers[i] <= layers[i - 1]) {
      throw ValidationError("profile '" + metric_name + "': layer indices not strictly increasing");
    }
    if (!(se[i] >= 0.0)) throw ValidationError("profile '" + metric_name + "': negative or NaN se");
  }
}

std::pair<double, double> mean_and_se(const std::vector<double>& values) {
  if (values.empty()) throw ParameterError("mean of an empty set");
  // Identical values: report them exactly rather than a rounded sum / n.
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
    return {values.front(), 0.0};
  }
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {mean, sd / std::sqrt(n)};
}

}  // namespace lingdim
