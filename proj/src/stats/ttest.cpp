#include "lingdim/stats/ttest.hpp"

#include <cmath>
#include <limits>

#include "lingdim/error.hpp"
#include "lingdim/stats/special.hpp"

namespace lingdim::stats {

SampleSummary summarize(std::span<const double> x) {
  SampleSummary s;
  s.n = x.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : x) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - s.mean) * (v - s.mean);
    s.variance = ss / static_cast<double>(s.n - 1);
  }
  return s;
}

TTestResult t_test_one_sided(std::span<const double> a, std::span<const double> b,
                             Alternative alternative, VarianceModel model) {
  if (a.size() < 2 || b.size() < 2) throw ParameterError("t-test needs at least 2 values per sample");
  for (auto sample : {a, b})
    for (double v : sample)
      if (!std::isfinite(v)) throw ValidationError("t-test input contains non-finite values");

  const SampleSummary sa = summarize(a);
  const SampleSummary sb = summarize(b);
  const auto na = static_cast<double>(sa.n);
  const auto nb = static_cast<double>(sb.n);

  TTestResult r;
  r.mean_a = sa.mean;
  r.mean_b = sb.mean;
  r.se_a = std::sqrt(sa.variance / na);
  r.se_b = std::sqrt(sb.variance / nb);

  double se = 0.0;
  if (model == VarianceModel::welch) {
    const double qa = sa.variance / na;
    const double qb = sb.variance / nb;
    se = std::sqrt(qa + qb);
    const double denom = qa * qa / (na - 1.0) + qb * qb / (nb - 1.0);
    r.dof = denom > 0.0 ? (qa + qb) * (qa + qb) / denom : na + nb - 2.0;
  } else {
    const double pooled = ((na - 1.0) * sa.variance + (nb - 1.0) * sb.variance) / (na + nb - 2.0);
    se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    r.dof = na + nb - 2.0;
  }

  const double diff = alternative == Alternative::a_less_than_b ? sb.mean - sa.mean : sa.mean - sb.mean;
  if (se == 0.0) {
    if (diff == 0.0) {
      throw UndefinedStatisticError("both samples are constant with equal means; t is undefined");
    }
    r.t_stat = diff > 0.0 ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
  } else {
    r.t_stat = diff / se;
  }
  r.p_one_sided = student_t_upper(r.t_stat, r.dof);
  return r;
}

}  // namespace lingdim::stats
