#ifndef LINGDIM_STATS_SURPRISAL_HPP
#define LINGDIM_STATS_SURPRISAL_HPP

#include <map>
#include <string>
#include <vector>

namespace lingdim::stats {

/// Per-token surprisals of one sentence, in nats.
struct SurprisalRecord {
  std::string sentence_id;
  std::string condition;
  std::string model;
  std::string dataset;
  std::vector<double> token_surprisals;

  double sentence_mean() const;
  /// Throws ValidationError on an empty, negative or non-finite token list.
  void validate() const;
};

struct ConditionSummary {
  std::string condition;
  std::size_t n_sentences = 0;
  double mean = 0.0;  // mean over sentences of the per-sentence token mean
  double se = 0.0;    // sample sd of sentence means / sqrt(n_sentences)
  std::vector<double> sentence_means;
};

/// Two-stage average: token mean per sentence, then mean and standard error
/// across sentences, separately for each condition. Every condition needs at
/// least two sentences.
std::map<std::string, ConditionSummary> surprisal_summary(const std::vector<SurprisalRecord>& records);

constexpr double kNatsPerBit = 0.69314718055994530942;

}  // namespace lingdim::stats

#endif  // LINGDIM_STATS_SURPRISAL_HPP
