#include "lingdim/stats/shapiro_wilk.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "lingdim/error.hpp"
#include "lingdim/stats/special.hpp"

namespace lingdim::stats {

namespace {

// c[0] + c[1] x + ... + c[N-1] x^(N-1)
template <std::size_t N>
double poly(const std::array<double, N>& c, double x) {
  double r = 0.0;
  for (std::size_t k = N; k-- > 0;) r = r * x + c[k];
  return r;
}

constexpr std::array<double, 6> kC1{0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
constexpr std::array<double, 6> kC2{0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
constexpr std::array<double, 4> kC3{0.544, -0.39978, 0.025054, -6.714e-4};
constexpr std::array<double, 4> kC4{1.3822, -0.77857, 0.062767, -0.0020322};
constexpr std::array<double, 4> kC5{-1.5861, -0.31082, -0.083751, 0.0038915};
constexpr std::array<double, 3> kC6{-0.4803, -0.082676, 0.0030302};
constexpr std::array<double, 2> kG{-2.273, 0.459};

// Half of the antisymmetric coefficient vector, a[0] pairs with the extremes.
std::vector<double> coefficients(std::size_t n) {
  const std::size_t half = n / 2;
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::sqrt(0.5);
    return a;
  }
  const double an = static_cast<double>(n);
  std::vector<double> m(half);
  double summ2 = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
    summ2 += m[i] * m[i];
  }
  summ2 *= 2.0;
  const double ssumm2 = std::sqrt(summ2);
  const double rsn = 1.0 / std::sqrt(an);
  const double a1 = poly(kC1, rsn) - m[0] / ssumm2;

  std::size_t first_scaled;
  double fac;
  if (n > 5) {
    first_scaled = 2;
    const double a2 = -m[1] / ssumm2 + poly(kC2, rsn);
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                    (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
    a[1] = a2;
  } else {
    first_scaled = 1;
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
  }
  a[0] = a1;
  for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
  return a;
}

}  // namespace

ShapiroWilkResult shapiro_wilk(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 3 || n > 5000) {
    throw ParameterError("Shapiro-Wilk needs 3 <= n <= 5000, got " + std::to_string(n));
  }
  std::vector<double> x(sample.begin(), sample.end());
  for (double v : x)
    if (!std::isfinite(v)) throw ValidationError("Shapiro-Wilk input contains non-finite values");
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (!(range > 0.0)) throw DegenerateSampleError("Shapiro-Wilk on a constant sample");

  const std::vector<double> half = coefficients(n);

  // W as the squared correlation between the ordered sample and the full
  // antisymmetric coefficient vector; computing 1 - W directly keeps precision
  // when W is close to 1.
  std::vector<double> coef(n, 0.0);
  for (std::size_t i = 0; i < half.size(); ++i) {
    coef[i] = -half[i];
    coef[n - 1 - i] = half[i];
  }
  double sa = 0.0;
  double sx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sa += coef[i];
    sx += x[i] / range;
  }
  sa /= static_cast<double>(n);
  sx /= static_cast<double>(n);
  double ssa = 0.0;
  double ssx = 0.0;
  double sax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = coef[i] - sa;
    const double dx = x[i] / range - sx;
    ssa += da * da;
    ssx += dx * dx;
    sax += da * dx;
  }
  const double ssassx = std::sqrt(ssa * ssx);
  const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);

  ShapiroWilkResult r;
  r.w = std::min(1.0, 1.0 - w1);

  const double an = static_cast<double>(n);
  if (n == 3) {
    constexpr double kPi6 = 1.90985931710274;   // 6 / pi
    constexpr double kStqr = 1.04719755119660;  // pi / 3
    r.p = std::max(0.0, kPi6 * (std::asin(std::sqrt(r.w)) - kStqr));
    return r;
  }
  double y = std::log(w1);
  double mean;
  double sd;
  if (n <= 11) {
    const double gamma = poly(kG, an);
    if (y >= gamma) {
      r.p = 1e-99;
      return r;
    }
    y = -std::log(gamma - y);
    mean = poly(kC3, an);
    sd = std::exp(poly(kC4, an));
  } else {
    const double ln_n = std::log(an);
    mean = poly(kC5, ln_n);
    sd = std::exp(poly(kC6, ln_n));
  }
  r.p = normal_upper((y - mean) / sd);
  return r;
}

}  // namespace lingdim::stats
