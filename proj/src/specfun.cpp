// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ambc/specfun.hpp"

#include <array>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ambc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

// ---------------------------------------------------------------------------
// LogDomainValue helpers
// ---------------------------------------------------------------------------

LogDomainValue signed_log_add(const LogDomainValue& a, const LogDomainValue& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const bool a_big = a.log_magnitude >= b.log_magnitude;
  const LogDomainValue& hi = a_big ? a : b;
  const LogDomainValue& lo = a_big ? b : a;
  const double r = std::exp(lo.log_magnitude - hi.log_magnitude);
  if (hi.sign == lo.sign) {
    return LogDomainValue::from_log(hi.log_magnitude + std::log1p(r), hi.sign);
  }
  if (r == 1.0) return {};
  return LogDomainValue::from_log(hi.log_magnitude + std::log1p(-r), hi.sign);
}

// ---------------------------------------------------------------------------
// Stirling remainder: delta(z) = lgamma(z) - [(z - 1/2) ln z - z + ln(2 pi)/2]
// ---------------------------------------------------------------------------

double stirling_remainder(double z) {
  if (z < 10.0) {
    return std::lgamma(z) - ((z - 0.5) * std::log(z) - z + 0.5 * kLogTwoPi);
  }
  static constexpr std::array<double, 8> kCoeff = {
      1.0 / 12.0,     -1.0 / 360.0,         1.0 / 1260.0, -1.0 / 1680.0,
      1.0 / 1188.0,   -691.0 / 360360.0,    1.0 / 156.0,  -3617.0 / 122400.0};
  const double iz = 1.0 / z;
  const double iz2 = iz * iz;
  double acc = 0.0;
  for (auto it = kCoeff.rbegin(); it != kCoeff.rend(); ++it) {
    acc = acc * iz2 + *it;
  }
  return acc * iz;
}

// a * ln(x (a+b) / a), evaluated through log1p near the beta mode.
double scaled_log_term(double a, double b, double x, double y) {
  const double d = (x * b - y * a) / a;
  if (std::abs(d) < 0.5) return a * std::log1p(d);
  return a * (std::log(x) + std::log1p(b / a));
}

// ---------------------------------------------------------------------------
// Debye polynomials u_k(t) for the uniform asymptotic expansion of I_nu.
// ---------------------------------------------------------------------------

constexpr int kDebyeTerms = 14;
constexpr int kDebyeMinOrder = 50;

using Poly = std::vector<long double>;

std::vector<Poly> build_debye_polys() {
  std::vector<Poly> u;
  u.push_back(Poly{1.0L});
  for (int k = 0; k + 1 < kDebyeTerms; ++k) {
    const Poly& c = u.back();
    Poly next(c.size() + 3, 0.0L);
    // 1/2 t^2 (1 - t^2) u_k'(t)
    for (std::size_t i = 1; i < c.size(); ++i) {
      const long double d = static_cast<long double>(i) * c[i];
      next[i + 1] += 0.5L * d;
      next[i + 3] -= 0.5L * d;
    }
    // 1/8 int_0^t (1 - 5 s^2) u_k(s) ds
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i] / (8.0L * static_cast<long double>(i + 1));
      next[i + 3] -= 5.0L * c[i] / (8.0L * static_cast<long double>(i + 3));
    }
    u.push_back(std::move(next));
  }
  return u;
}

const std::vector<Poly>& debye_polys() {
  static const std::vector<Poly> polys = build_debye_polys();
  return polys;
}

double log_bessel_i_debye(double nu, double x) {
  const double z = x / nu;
  const double p = std::hypot(1.0, z);
  const double t = 1.0 / p;
  const double eta = p + std::log(z) - std::log1p(p);

  const auto& polys = debye_polys();
  long double series = 0.0L;
  long double inv_nu_pow = 1.0L;
  for (const Poly& poly : polys) {
    long double v = 0.0L;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
      v = v * t + *it;
    }
    series += v * inv_nu_pow;
    inv_nu_pow /= nu;
  }
  return nu * eta - 0.5 * (kLogTwoPi + std::log(nu)) + 0.5 * std::log(t) +
         static_cast<double>(std::log(series));
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double x, double a, double b) {
  constexpr int kMaxIter = 200000;
  constexpr double kEps = 1e-16;
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
    const double md = m;
    const double m2 = 2.0 * md;
    double aa = md * (b - md) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + md) * (qab + md) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("reg_inc_beta: continued fraction did not converge");
}

// Acklam's rational approximation to the standard normal quantile.
double normal_quantile_seed(double p) {
  static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                              -2.759285104469687e+02, 1.383577518672690e+02,
                                              -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                              -1.556989798598866e+02, 6.680131188771972e+01,
                                              -1.328068155288572e+01};
  static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                              -2.400758277161838e+00, -2.549732539343734e+00,
                                              4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

// ---------------------------------------------------------------------------

LogDomainValue LogDomainValue::from_double(double v) {
  if (v == 0.0) return {};
  return {std::log(std::abs(v)), v > 0.0 ? 1 : -1};
}

LogDomainValue LogDomainValue::from_log(double log_magnitude, int sign) {
  if (sign == 0 || log_magnitude == -kInf) return {};
  return {log_magnitude, sign > 0 ? 1 : -1};
}

double LogDomainValue::to_double() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_magnitude);
}

LogDomainValue operator*(const LogDomainValue& a, const LogDomainValue& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return {a.log_magnitude + b.log_magnitude, a.sign * b.sign};
}

LogDomainValue operator/(const LogDomainValue& a, const LogDomainValue& b) {
  if (b.is_zero()) throw std::domain_error("LogDomainValue: division by zero");
  if (a.is_zero()) return {};
  return {a.log_magnitude - b.log_magnitude, a.sign * b.sign};
}

LogDomainValue operator+(const LogDomainValue& a, const LogDomainValue& b) {
  return signed_log_add(a, b);
}

LogDomainValue operator-(const LogDomainValue& a, const LogDomainValue& b) {
  return signed_log_add(a, LogDomainValue{b.log_magnitude, -b.sign});
}

// ---------------------------------------------------------------------------

double log_bessel_i(int order, double x) {
  if (order < 0) throw std::domain_error("log_bessel_i: negative order");
  if (!(x >= 0.0)) throw std::domain_error("log_bessel_i: x must be non-negative");
  if (x == 0.0) return order == 0 ? 0.0 : -kInf;
  if (std::isinf(x)) return kInf;

  if (order >= kDebyeMinOrder) return log_bessel_i_debye(order, x);

  // Backward recurrence on R_v = I_{v-1} / I_v = 2v/x + 1 / R_{v+1}.
  const double top = log_bessel_i_debye(kDebyeMinOrder, x);
  const double above = log_bessel_i_debye(kDebyeMinOrder + 1, x);
  double ratio = std::exp(top - above);  // R_{top+1}
  double log_i = top;
  for (int v = kDebyeMinOrder; v > order; --v) {
    ratio = 2.0 * v / x + 1.0 / ratio;
    log_i += std::log(ratio);
  }
  return log_i;
}

double log_beta_prefactor(double x, double a, double b) {
  if (x <= 0.0 || x >= 1.0) return -kInf;
  const double y = 1.0 - x;
  const double s = a + b;
  return scaled_log_term(a, b, x, y) + scaled_log_term(b, a, y, x) +
         0.5 * (std::log(a) + std::log(b) - std::log(s) - kLogTwoPi) + stirling_remainder(s) -
         stirling_remainder(a) - stirling_remainder(b);
}

double reg_inc_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("reg_inc_beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("reg_inc_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_beta_prefactor(x, a, b)) * beta_continued_fraction(x, a, b) / a;
  }
  const double y = 1.0 - x;
  return 1.0 - std::exp(log_beta_prefactor(y, b, a)) * beta_continued_fraction(y, b, a) / b;
}

double q_func(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("q_inv: p must lie in (0, 1)");
  if (p == 0.5) return 0.0;

  double x = -normal_quantile_seed(p);
  for (int it = 0; it < 8 && std::isfinite(x); ++it) {
    const double density = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    if (density == 0.0) break;
    const double step = (q_func(x) - p) / density;
    x += step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  if (std::isfinite(x) && std::abs(q_func(x) - p) <= 1e-14 + 1e-12 * p) return x;

  // Bisection fallback; q_func is strictly decreasing.
  double lo = -40.0;
  double hi = 40.0;
  for (int it = 0; it < 400 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (q_func(mid) > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double log_poisson_pmf(long k, double mean) {
  if (k < 0) return -kInf;
  if (mean == 0.0) return k == 0 ? 0.0 : -kInf;
  if (k == 0) return -mean;
  const double kd = static_cast<double>(k);
  // mean * bd(k / mean) with bd(r) = r ln r - r + 1, kept free of cancellation.
  const double eps = (kd - mean) / mean;
  const double deviance = kd * std::log1p(eps) - (kd - mean);
  return -deviance - 0.5 * (kLogTwoPi + std::log(kd)) - stirling_remainder(kd);
}

}  // namespace ambc
