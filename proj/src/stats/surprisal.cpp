#include "lingdim/stats/surprisal.hpp"

#include <algorithm>
#include <cmath>

#include "lingdim/error.hpp"

namespace lingdim::stats {

namespace {

// Sums ascending values so the result does not depend on input order.
double ordered_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

double SurprisalRecord::sentence_mean() const {
  double s = 0.0;
  for (double v : token_surprisals) s += v;
  return s / static_cast<double>(token_surprisals.size());
}

void SurprisalRecord::validate() const {
  if (token_surprisals.empty()) throw ValidationError("sentence '" + sentence_id + "' has no tokens");
  for (double v : token_surprisals) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("sentence '" + sentence_id + "' has a negative or non-finite surprisal");
    }
  }
}

std::map<std::string, ConditionSummary> surprisal_summary(const std::vector<SurprisalRecord>& records) {
  std::map<std::string, ConditionSummary> out;
  for (const auto& r : records) {
    r.validate();
    auto& s = out[r.condition];
    s.condition = r.condition;
    s.sentence_means.push_back(r.sentence_mean());
  }
  for (auto& [name, s] : out) {
    s.n_sentences = s.sentence_means.size();
    if (s.n_sentences < 2) {
      throw ParameterError("condition '" + name + "' has fewer than 2 sentences");
    }
    const auto n = static_cast<double>(s.n_sentences);
    s.mean = ordered_sum(s.sentence_means) / n;
    std::vector<double> sq;
    sq.reserve(s.sentence_means.size());
    for (double m : s.sentence_means) sq.push_back((m - s.mean) * (m - s.mean));
    s.se = std::sqrt(ordered_sum(std::move(sq)) / (n - 1.0)) / std::sqrt(n);
  }
  return out;
}

}  // namespace lingdim::stats
