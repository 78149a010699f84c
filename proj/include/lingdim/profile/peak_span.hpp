#ifndef LINGDIM_PROFILE_PEAK_SPAN_HPP
#define LINGDIM_PROFILE_PEAK_SPAN_HPP

#include <optional>
#include <vector>

#include "lingdim/profile/profile.hpp"

namespace lingdim {

struct PeakSpan {
  int peak_layer = 0;
  int span_start = 0;
  int span_end = 0;
  int search_lo = 0;
  int search_hi = 0;
  /// The maximum sits on an end of the searched range.
  bool boundary_peak = false;
};

/// Locates the maximum of `profile.mean` inside [search_lo, search_hi]
/// (ties to the lowest layer) and widens it to the nearest layers on either
/// side where the second difference m[l+1] - 2 m[l] + m[l-1] is >= 0.
/// Without such a layer the span runs to the end of the range.
///
/// Defaults: search_lo = 1 (skip the embedding layer), search_hi = last layer.
/// Needs at least five layers in range.
PeakSpan peak_span(const LayerProfile& profile, std::optional<int> search_lo = std::nullopt,
                   std::optional<int> search_hi = std::nullopt);

/// Same, on raw values with layers 0..n-1.
PeakSpan peak_span(const std::vector<double>& values, int search_lo, int search_hi);

}  // namespace lingdim

#endif  // LINGDIM_PROFILE_PEAK_SPAN_HPP
