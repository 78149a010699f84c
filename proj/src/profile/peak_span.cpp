#include "lingdim/profile/peak_span.hpp"

#include <algorithm>

namespace lingdim {

PeakSpan peak_span(const LayerProfile& profile, std::optional<int> search_lo,
                   std::optional<int> search_hi) {
  profile.validate();
  if (profile.layers.empty()) throw ParameterError("empty profile");
  const int lo = search_lo.value_or(1);
  const int hi = search_hi.value_or(profile.layers.back());
  if (lo > hi) throw ParameterError("search_lo exceeds search_hi");

  const auto first = std::lower_bound(profile.layers.begin(), profile.layers.end(), lo);
  const auto last = std::upper_bound(profile.layers.begin(), profile.layers.end(), hi);
  const auto a = static_cast<std::size_t>(first - profile.layers.begin());
  const auto b = static_cast<std::size_t>(last - profile.layers.begin());
  if (b < a + 5) {
    throw ParameterError("peak search range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                         "] holds fewer than 5 layers");
  }
  const auto& m = profile.mean;

  std::size_t peak = a;
  for (std::size_t i = a + 1; i < b; ++i) {
    if (m[i] > m[peak]) peak = i;
  }
  auto concave_up = [&](std::size_t i) { return m[i + 1] - 2.0 * m[i] + m[i - 1] >= 0.0; };

  std::size_t start = a;
  for (std::size_t i = peak; i > a + 1;) {
    --i;
    if (concave_up(i)) {
      start = i;
      break;
    }
  }
  std::size_t end = b - 1;
  for (std::size_t i = peak + 1; i + 1 < b; ++i) {
    if (concave_up(i)) {
      end = i;
      break;
    }
  }

  PeakSpan out;
  out.search_lo = profile.layers[a];
  out.search_hi = profile.layers[b - 1];
  out.peak_layer = profile.layers[peak];
  out.span_start = profile.layers[start];
  out.span_end = profile.layers[end];
  out.boundary_peak = peak == a || peak == b - 1;
  return out;
}

PeakSpan peak_span(const std::vector<double>& values, int search_lo, int search_hi) {
  LayerProfile p;
  p.metric_name = "values";
  p.mean = values;
  p.se.assign(values.size(), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) p.layers.push_back(static_cast<int>(i));
  return peak_span(p, search_lo, search_hi);
}

}  // namespace lingdim
