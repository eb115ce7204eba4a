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

#ifndef AMBC_BER_THEORY_HPP
#define AMBC_BER_THEORY_HPP

#include <complex>
#include <stdexcept>
#include <string_view>

namespace ambc {

struct DetectionParams {
  int m_sc = 288;
  int n_chips = 4;
  double h_on_sq = 0.0;   // |h_d + h_s h_b|^2
  double h_off_sq = 0.0;  // |h_d|^2
  double noise_power = 1.0;
  double prior_s0 = 0.5;

  /// Throws std::invalid_argument unless m_sc * n_chips is even and positive,
  /// powers are non-negative, noise is positive and the prior is in [0, 1].
  void validate() const;
};

struct SeriesControl {
  double rel_tol = 1e-12;  // Poisson mass left out of each index
  long max_terms = 200000; // per index
};

class SeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pr(xi <= x) for xi = (chi'^2_nu1(lam1) / nu1) / (chi'^2_nu2(lam2) / nu2) with nu1 == nu2
/// folded into the ratio of sums, i.e.
///   sum_j sum_k Pois(j; lam1/2) Pois(k; lam2/2) I_{x/(1+x)}(nu1/2 + j, nu2/2 + k).
/// Both indices run outward from their Poisson modes until the left-out mass is
/// below ctl.rel_tol. Throws std::domain_error for x <= 0, odd or non-positive
/// degrees of freedom or negative noncentralities, and SeriesError when an index
/// range would exceed ctl.max_terms.
double doubly_noncentral_f_cdf(double x, int nu1, int nu2, double lam1, double lam2, const SeriesControl& ctl = {});

/// Pr(xi > x), evaluated as the CDF of 1/xi so small tails keep their precision.
double doubly_noncentral_f_ccdf(double x, int nu1, int nu2, double lam1, double lam2,
                                const SeriesControl& ctl = {});

/// BER of the correlation detector (threshold xi = 1 on the energy ratio of the
/// chips where s0 is on versus off). The detector is assumed to know the sign of
/// h_on_sq - h_off_sq.
double exact_ber(const DetectionParams& p, const SeriesControl& ctl = {});

/// Q(sqrt(N M (on - off)^2 / (4 sigma^2 (sigma^2 + on + off)))).
double gaussian_ber(const DetectionParams& p);

/// Q(sqrt(gamma_b)). Throws std::domain_error for negative gamma_b.
double fsk_coherent_ber(double gamma_b);

enum class BerEngine { Exact, Gaussian };

std::string_view to_string(BerEngine e);
BerEngine parse_engine(std::string_view name);

/// BER at LTE SNR gamma (linear) when the scattered path is iota times the direct one.
double ber_vs_iota(std::complex<double> iota, double gamma, int m_sc, int n_chips, const SeriesControl& ctl = {},
                   BerEngine engine = BerEngine::Exact);

/// |1 + iota|^2 > 1 at which gaussian_ber equals ber_target. Throws
/// std::domain_error unless 0 < ber_target < 0.5 (0.5 itself maps to 1).
double iota_magnitude_for_target(double ber_target, double gamma, int m_sc, int n_chips);

}  // namespace ambc

#endif  // AMBC_BER_THEORY_HPP
