#ifndef LINGDIM_STATS_SPECIAL_HPP
#define LINGDIM_STATS_SPECIAL_HPP

namespace lingdim::stats {

/// Regularized incomplete beta I_x(a, b), continued fraction (modified Lentz).
double incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with `dof` degrees of freedom (dof > 0, real).
double student_t_cdf(double t, double dof);

/// P(T > t).
double student_t_upper(double t, double dof);

double normal_cdf(double z);
double normal_upper(double z);

/// Inverse standard normal CDF (Wichura's AS 241, about 1e-16 relative).
double normal_quantile(double p);

}  // namespace lingdim::stats

#endif  // LINGDIM_STATS_SPECIAL_HPP
