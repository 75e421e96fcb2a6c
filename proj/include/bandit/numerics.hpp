#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bandit::numerics {

/// Standard normal CDF from erfc; absolute error well below 1e-10.
inline double std_normal_cdf(double z) {
  return 0.5 * std::erfc(-z * M_SQRT1_2);
}

/// Upper tail 1 - Phi(z), computed without cancellation for large z.
inline double std_normal_sf(double z) {
  return 0.5 * std::erfc(z * M_SQRT1_2);
}

/// Normal with mean/std truncated to [lower, upper]. std == 0 is the
/// degenerate point mass and must be handled by the caller.
struct TruncatedGaussianSpec {
  double mean = 0.0;
  double std = 1.0;
  double lower = 0.0;
  double upper = 1.0;

  void validate() const {
    if (!(lower < upper)) throw std::invalid_argument("truncated gaussian: lower must be < upper");
    if (!(std >= 0.0)) throw std::invalid_argument("truncated gaussian: std must be >= 0");
  }
};

namespace detail {

inline double truncated_normal_mass(const TruncatedGaussianSpec& spec, double& z_lo, double& z_hi) {
  z_lo = (spec.lower - spec.mean) / spec.std;
  z_hi = (spec.upper - spec.mean) / spec.std;
  return std_normal_sf(z_lo) - std_normal_sf(z_hi);
}

}  // namespace detail

inline double truncated_normal_cdf(double x, const TruncatedGaussianSpec& spec) {
  spec.validate();
  if (!(spec.std > 0.0)) throw std::invalid_argument("truncated gaussian cdf: std must be > 0");
  if (x <= spec.lower) return 0.0;
  if (x >= spec.upper) return 1.0;
  double z_lo, z_hi;
  const double mass = detail::truncated_normal_mass(spec, z_lo, z_hi);
  if (!(mass > 0.0)) return x < spec.mean ? 0.0 : 1.0;  // both bounds in one far tail
  const double z = (x - spec.mean) / spec.std;
  const double f = (std_normal_cdf(z) - std_normal_cdf(z_lo)) / mass;
  return f < 0.0 ? 0.0 : (f > 1.0 ? 1.0 : f);
}

/// Survival 1 - F(x); evaluated through the upper tail so that values down
/// to ~1e-300 keep full relative accuracy.
inline double truncated_normal_sf(double x, const TruncatedGaussianSpec& spec) {
  spec.validate();
  if (!(spec.std > 0.0)) throw std::invalid_argument("truncated gaussian sf: std must be > 0");
  if (x <= spec.lower) return 1.0;
  if (x >= spec.upper) return 0.0;
  double z_lo, z_hi;
  const double mass = detail::truncated_normal_mass(spec, z_lo, z_hi);
  if (!(mass > 0.0)) return x < spec.mean ? 1.0 : 0.0;
  const double z = (x - spec.mean) / spec.std;
  const double s = (std_normal_sf(z) - std_normal_sf(z_hi)) / mass;
  return s < 0.0 ? 0.0 : (s > 1.0 ? 1.0 : s);
}

inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace detail {

/// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 600;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b).
inline double reg_inc_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("reg_inc_beta: a, b must be > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_bt = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double bt = std::exp(log_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return bt * detail::beta_cf(a, b, x) / a;
  }
  return 1.0 - bt * detail::beta_cf(b, a, 1.0 - x) / b;
}

inline double beta_cdf(double x, double a, double b) { return reg_inc_beta(a, b, x); }

inline double beta_pdf(double x, double a, double b) {
  if (x <= 0.0 || x >= 1.0) {
    // Density at the boundary; only the interior is used by the solvers.
    if (x == 0.0 && a < 1.0) return std::numeric_limits<double>::infinity();
    if (x == 1.0 && b < 1.0) return std::numeric_limits<double>::infinity();
    if (x == 0.0 && a == 1.0) return 1.0 / std::exp(log_beta(a, b));
    if (x == 1.0 && b == 1.0) return 1.0 / std::exp(log_beta(a, b));
    return 0.0;
  }
  return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta(a, b));
}

namespace detail {

/// Inverse of I_x(a, b): bracketed Newton with bisection fallback.
/// Terminates with |I_x - p| far below the 1e-8 contract.
inline double inc_beta_inv(double p, double a, double b) {
  constexpr double kCdfTol = 1e-12;
  double lo = 0.0, hi = 1.0;
  double x = a / (a + b);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = reg_inc_beta(a, b, x) - p;
    if (std::abs(f) <= kCdfTol) return x;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    double next = 0.0;
    const double pdf = beta_pdf(x, a, b);
    bool use_newton = pdf > 0.0 && std::isfinite(pdf);
    if (use_newton) {
      next = x - f / pdf;
      if (!(next > lo && next < hi)) use_newton = false;
    }
    if (!use_newton) next = 0.5 * (lo + hi);
    if (next == x || hi - lo < 1e-16) return x;
    x = next;
  }
  return x;
}

}  // namespace detail

/// Quantile of Beta(a, b): x with I_x(a, b) = q to better than 1e-8 in CDF
/// space.
inline double beta_quantile(double q, double a, double b) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("beta_quantile: q must lie in (0,1)");
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("beta_quantile: a, b must be > 0");
  return detail::inc_beta_inv(q, a, b);
}

/// CDF of the standard Student-t with dof degrees of freedom.
inline double student_t_cdf(double t, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("student_t_cdf: dof must be > 0");
  if (t == 0.0) return 0.5;
  const double x = dof / (dof + t * t);
  const double tail = 0.5 * reg_inc_beta(0.5 * dof, 0.5, x);
  return t < 0.0 ? tail : 1.0 - tail;
}

/// Quantile of a location-scale Student-t; inverse accurate to 1e-8 in CDF
/// space. Solved through the incomplete-beta inverse: with
/// y = t^2/(dof + t^2), I_y(1/2, dof/2) = 1 - 2 min(q, 1-q).
inline double student_t_quantile(double q, double dof, double location = 0.0, double scale = 1.0) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("student_t_quantile: q must lie in (0,1)");
  if (!(dof > 0.0)) throw std::invalid_argument("student_t_quantile: dof must be > 0");
  if (!(scale > 0.0)) throw std::invalid_argument("student_t_quantile: scale must be > 0");
  if (q == 0.5) return location;
  const double tail = q < 0.5 ? q : 1.0 - q;
  const double y = detail::inc_beta_inv(1.0 - 2.0 * tail, 0.5, 0.5 * dof);
  const double t = std::sqrt(dof * y / (1.0 - y));
  return location + scale * (q < 0.5 ? -t : t);
}

}  // namespace bandit::numerics
