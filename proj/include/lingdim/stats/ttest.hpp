#ifndef LINGDIM_STATS_TTEST_HPP
#define LINGDIM_STATS_TTEST_HPP

#include <span>
#include <string>

namespace lingdim::stats {

enum class Alternative {
  a_less_than_b,     // H1: mean(a) < mean(b), t = (mean_b - mean_a) / se
  a_greater_than_b,  // H1: mean(a) > mean(b), t = (mean_a - mean_b) / se
};

enum class VarianceModel { welch, pooled };

struct TTestResult {
  double t_stat = 0.0;
  double dof = 0.0;
  double p_one_sided = 0.5;  // P(T > t_stat)
  double mean_a = 0.0;
  double mean_b = 0.0;
  double se_a = 0.0;  // standard error of mean_a
  double se_b = 0.0;
};

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
};

SampleSummary summarize(std::span<const double> x);

/// One-sided two-sample t-test. Welch (unequal variances, Welch-Satterthwaite
/// dof) by default; `pooled` gives the classical equal-variance test.
TTestResult t_test_one_sided(std::span<const double> a, std::span<const double> b,
                             Alternative alternative = Alternative::a_less_than_b,
                             VarianceModel model = VarianceModel::welch);

inline TTestResult welch_t_one_sided(std::span<const double> a, std::span<const double> b,
                                     Alternative alternative = Alternative::a_less_than_b) {
  return t_test_one_sided(a, b, alternative, VarianceModel::welch);
}

}  // namespace lingdim::stats

#endif  // LINGDIM_STATS_TTEST_HPP
