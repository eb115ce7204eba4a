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

#ifndef AMBC_SPECFUN_HPP
#define AMBC_SPECFUN_HPP

#include <cmath>
#include <limits>

namespace ambc {

/// A real number stored as sign * exp(log_magnitude).
///
/// Used for products such as (lambda/2)^j / j! that overflow a double long
/// before the quantity they contribute to does.
struct LogDomainValue {
  double log_magnitude = -std::numeric_limits<double>::infinity();
  int sign = 0;

  static LogDomainValue from_double(double v);
  static LogDomainValue from_log(double log_magnitude, int sign = 1);

  [[nodiscard]] double to_double() const;
  [[nodiscard]] bool is_zero() const { return sign == 0; }

  friend LogDomainValue operator*(const LogDomainValue& a, const LogDomainValue& b);
  friend LogDomainValue operator/(const LogDomainValue& a, const LogDomainValue& b);
  friend LogDomainValue operator+(const LogDomainValue& a, const LogDomainValue& b);
  friend LogDomainValue operator-(const LogDomainValue& a, const LogDomainValue& b);
};

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Natural log of the modified Bessel function of the first kind, ln I_order(x).
///
/// Orders >= 50 use the uniform (Debye) asymptotic expansion directly; lower
/// orders run the stable backward three-term recurrence down from orders 50/51.
/// Returns -inf for I_order(0) = 0. Throws std::domain_error for x < 0 or
/// order < 0.
double log_bessel_i(int order, double x);

/// ln[x^a (1-x)^b / B(a,b)], accurate for large a and b (no lgamma cancellation).
double log_beta_prefactor(double x, double a, double b);

/// Regularized incomplete beta function I_x(a, b).
///
/// Continued fraction with the symmetry switch at x > (a+1)/(a+b+2).
/// Throws std::domain_error outside 0 <= x <= 1, a > 0, b > 0.
double reg_inc_beta(double x, double a, double b);

/// Standard normal tail probability Q(x) = 1 - Phi(x).
double q_func(double x);

/// Inverse of q_func on (0, 1). Throws std::domain_error outside the open interval.
double q_inv(double p);

/// ln of the Poisson(mean) probability mass at k. mean == 0 is a point mass at 0.
double log_poisson_pmf(long k, double mean);

}  // namespace ambc

#endif  // AMBC_SPECFUN_HPP
