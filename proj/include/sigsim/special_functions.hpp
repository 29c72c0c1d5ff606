#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sigsim/errors.hpp"

namespace sigsim {

namespace detail {

// Lanczos approximation, Godfrey's g=607/128 15-term coefficient set.
inline constexpr double lanczos_g = 607.0 / 128.0;
inline constexpr double lanczos_coeff[15] = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

} // namespace detail

// ln Gamma(x) for x > 0.
inline double ln_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("ln_gamma: x must be > 0");
  if (x < 0.5) {
    // reflection keeps the Lanczos sum in its accurate range
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - ln_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double sum = detail::lanczos_coeff[0];
  for (int k = 1; k < 15; ++k) sum += detail::lanczos_coeff[k] / (z + k);
  const double t = z + detail::lanczos_g + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

namespace detail {

// Continued fraction for the regularized incomplete beta (modified Lentz).
// Converges for x < (a+1)/(a+b+2); the caller applies the symmetry transform
// beyond that point.
inline double inc_beta_cf(double x, double a, double b) {
  constexpr int max_iter = 300;
  constexpr double rel_tol = 1e-15;
  constexpr double tiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    num = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < rel_tol) return h;
  }
  throw NumericError("reg_inc_beta: continued fraction did not converge");
}

} // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double reg_inc_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("reg_inc_beta: a and b must be > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("reg_inc_beta: x must be in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = a * std::log(x) + b * std::log1p(-x)
                          - (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b));
  if (x < (a + 1.0) / (a + b + 2.0))
    return std::exp(ln_front) * detail::inc_beta_cf(x, a, b) / a;
  return 1.0 - std::exp(ln_front) * detail::inc_beta_cf(1.0 - x, b, a) / b;
}

// Student t CDF: F(t; df) = 1 - I_{df/(df+t^2)}(df/2, 1/2)/2 for t >= 0,
// F(-t) = 1 - F(t).
inline double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw std::domain_error("student_t_cdf: df must be > 0");
  if (std::isnan(t)) throw std::domain_error("student_t_cdf: t must not be NaN");
  if (std::isinf(t)) return t > 0.0 ? 1.0 : 0.0;
  const double both_tails = reg_inc_beta(df / (df + t * t), 0.5 * df, 0.5);
  return t >= 0.0 ? 1.0 - 0.5 * both_tails : 0.5 * both_tails;
}

// Two-sided p-value of a t statistic: 2*(1 - F(|t|; df)).
inline double two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw std::domain_error("two_sided_p: df must be > 0");
  if (std::isnan(t)) throw std::domain_error("two_sided_p: t must not be NaN");
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  return std::clamp(reg_inc_beta(df / (df + t * t), 0.5 * df, 0.5), 0.0, 1.0);
}

namespace detail {

inline double student_t_pdf(double t, double df) {
  const double half = 0.5 * (df + 1.0);
  return std::exp(ln_gamma(half) - ln_gamma(0.5 * df)
                  - 0.5 * std::log(df * std::numbers::pi) - half * std::log1p(t * t / df));
}

// Acklam's rational approximation to the standard normal quantile,
// |relative error| < 1.15e-9. Used only to seed Newton iterations.
inline double inverse_normal_cdf(double p) {
  constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                           -2.759285104469687e+02, 1.383577518672690e+02,
                           -3.066479806614716e+01, 2.506628277459239e+00};
  constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                           -1.556989798598866e+02, 6.680131188771972e+01,
                           -1.328068155288572e+01};
  constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                           -2.400758277161838e+00, -2.549732539343734e+00,
                           4.374664141464968e+00,  2.938163982698783e+00};
  constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                           2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
           / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q
           / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
         / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

} // namespace detail

// Inverse of student_t_cdf in t for fixed df. Newton iteration seeded from a
// normal-approximation guess, with a bisection fallback whenever a Newton step
// leaves the current bracket.
inline double student_t_quantile(double p, double df) {
  if (!(df > 0.0)) throw std::domain_error("student_t_quantile: df must be > 0");
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("student_t_quantile: p must be in (0,1)");
  if (p == 0.5) return 0.0;
  const double target = p > 0.5 ? p : 1.0 - p; // solve in the upper half, mirror at the end

  double guess;
  if (df == 1.0) {
    guess = std::tan(std::numbers::pi * (target - 0.5)); // Cauchy closed form
  } else if (df == 2.0) {
    const double u = 2.0 * target - 1.0;
    guess = u * std::sqrt(2.0 / (1.0 - u * u));
  } else {
    // Cornish-Fisher expansion around the normal quantile
    const double z = detail::inverse_normal_cdf(target);
    const double z2 = z * z;
    guess = z * (1.0 + (z2 + 1.0) / (4.0 * df)
                 + (5.0 * z2 * z2 + 16.0 * z2 + 3.0) / (96.0 * df * df)
                 + (3.0 * z2 * z2 * z2 + 19.0 * z2 * z2 + 17.0 * z2 - 15.0)
                       / (384.0 * df * df * df));
  }

  double lo = 0.0;
  double hi = std::max(1.0, 2.0 * std::fabs(guess));
  while (student_t_cdf(hi, df) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericError("student_t_quantile: failed to bracket the root");
  }

  double x = std::clamp(std::fabs(guess), lo, hi);
  double f = student_t_cdf(x, df) - target;
  for (int iter = 0; iter < 100 && std::fabs(f) > 1e-13; ++iter) {
    if (f > 0.0) hi = x;
    else lo = x;
    const double deriv = detail::student_t_pdf(x, df);
    double next = x - f / deriv;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
    f = student_t_cdf(x, df) - target;
  }
  return p > 0.5 ? x : -x;
}

} // namespace sigsim
