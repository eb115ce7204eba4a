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

#include "ambc/ber_theory.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ambc/specfun.hpp"

namespace ambc {

namespace {

struct PoissonRange {
  long lo = 0;
  std::vector<double> weights;  // weights[i] = Pois(lo + i)
};

// Expand [lo, hi] from the mode, always taking the heavier neighbour, until the
// captured mass reaches 1 - tol.
PoissonRange poisson_range(double mean, double tol, long max_terms) {
  PoissonRange r;
  if (mean == 0.0) {
    r.weights = {1.0};
    return r;
  }
  const long mode = static_cast<long>(std::floor(mean));
  long lo = mode;
  long hi = mode;
  double w_lo = std::exp(log_poisson_pmf(lo, mean));
  CompensatedSum mass;
  mass.add(w_lo);
  std::vector<double> left;
  std::vector<double> right;
  double next_lo = lo > 0 ? std::exp(log_poisson_pmf(lo - 1, mean)) : 0.0;
  double next_hi = std::exp(log_poisson_pmf(hi + 1, mean));
  while (1.0 - mass.value() > tol) {
    if (hi - lo + 1 >= max_terms) {
      throw SeriesError("doubly_noncentral_f_cdf: Poisson range exceeded max_terms before reaching rel_tol");
    }
    if (next_lo <= 0.0 && next_hi <= 0.0) break;  // remaining mass below double resolution
    if (next_lo >= next_hi) {
      --lo;
      left.push_back(next_lo);
      mass.add(next_lo);
      next_lo = lo > 0 ? std::exp(log_poisson_pmf(lo - 1, mean)) : 0.0;
    } else {
      ++hi;
      right.push_back(next_hi);
      mass.add(next_hi);
      next_hi = std::exp(log_poisson_pmf(hi + 1, mean));
    }
  }
  r.lo = lo;
  r.weights.assign(left.rbegin(), left.rend());
  r.weights.push_back(w_lo);
  r.weights.insert(r.weights.end(), right.begin(), right.end());
  return r;
}

void check_f_args(double x, int nu1, int nu2, double lam1, double lam2) {
  if (!(x > 0.0)) throw std::domain_error("doubly_noncentral_f_cdf: x must be positive");
  if (nu1 <= 0 || nu2 <= 0 || nu1 % 2 != 0 || nu2 % 2 != 0) {
    throw std::domain_error("doubly_noncentral_f_cdf: degrees of freedom must be even and positive");
  }
  if (!(lam1 >= 0.0) || !(lam2 >= 0.0) || !std::isfinite(lam1) || !std::isfinite(lam2)) {
    throw std::domain_error("doubly_noncentral_f_cdf: noncentralities must be finite and non-negative");
  }
}

double q_argument_sq(const DetectionParams& p) {
  const double d = p.h_on_sq - p.h_off_sq;
  const double s2 = p.noise_power;
  return static_cast<double>(p.n_chips) * p.m_sc * d * d / (4.0 * s2 * (s2 + p.h_on_sq + p.h_off_sq));
}

}  // namespace

void DetectionParams::validate() const {
  if (m_sc < 1 || n_chips < 1) throw std::invalid_argument("DetectionParams: m_sc and n_chips must be positive");
  if ((static_cast<long>(m_sc) * n_chips) % 2 != 0) {
    throw std::invalid_argument("DetectionParams: m_sc * n_chips must be even");
  }
  if (!(h_on_sq >= 0.0) || !(h_off_sq >= 0.0)) throw std::invalid_argument("DetectionParams: negative channel power");
  if (!(noise_power > 0.0)) throw std::invalid_argument("DetectionParams: noise power must be positive");
  if (!(prior_s0 >= 0.0 && prior_s0 <= 1.0)) throw std::invalid_argument("DetectionParams: prior outside [0, 1]");
}

double doubly_noncentral_f_cdf(double x, int nu1, int nu2, double lam1, double lam2, const SeriesControl& ctl) {
  check_f_args(x, nu1, nu2, lam1, lam2);
  if (!(ctl.rel_tol > 0.0 && ctl.rel_tol < 1.0) || ctl.max_terms < 1) {
    throw std::domain_error("doubly_noncentral_f_cdf: bad series control");
  }
  if (std::isinf(x)) return 1.0;
  const double z = x / (1.0 + x);
  if (z >= 1.0) return 1.0;

  const PoissonRange pj = poisson_range(lam1 / 2.0, ctl.rel_tol, ctl.max_terms);
  const PoissonRange pk = poisson_range(lam2 / 2.0, ctl.rel_tol, ctl.max_terms);
  const long nj = static_cast<long>(pj.weights.size());
  const long nk = static_cast<long>(pk.weights.size());
  const double a_lo = nu1 / 2.0 + pj.lo;
  const double a_hi = a_lo + (nj - 1);
  const double b_lo = nu2 / 2.0 + pk.lo;

  // Each row (fixed b) runs downward in a with I(a-1, b) = I(a, b) + T(a-1, b) / (a-1),
  // T(a, b) = z^a (1-z)^b / B(a, b). Only positive terms are added, so starting from
  // the smallest value (largest a) keeps full relative precision.
  std::vector<double> tail_mass(nj);  // sum of weights[0..j]
  {
    CompensatedSum acc;
    for (long j = 0; j < nj; ++j) {
      acc.add(pj.weights[j]);
      tail_mass[j] = acc.value();
    }
  }
  constexpr double kLogTiny = -700.0;
  CompensatedSum total;
  for (long k = 0; k < nk; ++k) {
    const double b = b_lo + k;
    auto log_t_at = [&](long j) { return log_beta_prefactor(z, a_lo + j, b); };
    // T(a+1, b) / T(a, b) = z (a + b) / a, so T falls with a above a_peak. Rows whose
    // upper end has T below exp(-700) start where T becomes representable; the
    // skipped terms change I by less than that.
    long j_start = nj - 1;
    if (log_t_at(j_start) < kLogTiny) {
      const double a_peak = z * b / (1.0 - z);
      const long jm = std::clamp(static_cast<long>(std::ceil(a_peak - a_lo)), 0L, nj - 1);
      if (log_t_at(jm) < kLogTiny) {
        total.add(pk.weights[k] * reg_inc_beta(z, a_hi, b) * tail_mass[nj - 1]);
        continue;
      }
      long good = jm;
      long bad = nj - 1;
      while (bad - good > 1) {
        const long mid = good + (bad - good) / 2;
        (log_t_at(mid) >= kLogTiny ? good : bad) = mid;
      }
      j_start = good;
    }
    double ib = reg_inc_beta(z, a_lo + j_start, b);
    double t = std::exp(log_t_at(j_start));
    CompensatedSum row;
    row.add(ib * (tail_mass[nj - 1] - (j_start > 0 ? tail_mass[j_start - 1] : 0.0)));
    for (long j = j_start - 1; j >= 0; --j) {
      if (ib >= 1.0) {
        row.add(tail_mass[j]);
        break;
      }
      const double a = a_lo + j;  // step from a + 1 down to a
      t *= a / (z * (a + b));
      ib = std::min(1.0, ib + t / a);
      row.add(pj.weights[j] * ib);
    }
    total.add(pk.weights[k] * row.value());
  }
  return std::clamp(total.value(), 0.0, 1.0);
}

double doubly_noncentral_f_ccdf(double x, int nu1, int nu2, double lam1, double lam2, const SeriesControl& ctl) {
  check_f_args(x, nu1, nu2, lam1, lam2);
  if (std::isinf(x)) return 0.0;
  return doubly_noncentral_f_cdf(1.0 / x, nu2, nu1, lam2, lam1, ctl);
}

double exact_ber(const DetectionParams& p, const SeriesControl& ctl) {
  p.validate();
  const double hi = std::max(p.h_on_sq, p.h_off_sq);
  const double lo = std::min(p.h_on_sq, p.h_off_sq);
  const int nu = p.m_sc * p.n_chips;
  // Sum of the N/2 chip energies in one state: u = 2y / sigma^2 ~ chi'^2 with M N
  // degrees of freedom and noncentrality M N |h|^2 / sigma^2.
  const double lam_hi = nu * hi / p.noise_power;
  const double lam_lo = nu * lo / p.noise_power;
  // s0 sent: the "s0 on" chips carry the stronger state; error when xi < 1.
  const double err0 = doubly_noncentral_f_cdf(1.0, nu, nu, lam_hi, lam_lo, ctl);
  // s1 sent: roles swap; error when xi >= 1.
  const double err1 = doubly_noncentral_f_ccdf(1.0, nu, nu, lam_lo, lam_hi, ctl);
  return p.prior_s0 * err0 + (1.0 - p.prior_s0) * err1;
}

double gaussian_ber(const DetectionParams& p) {
  p.validate();
  return q_func(std::sqrt(q_argument_sq(p)));
}

double fsk_coherent_ber(double gamma_b) {
  if (!(gamma_b >= 0.0)) throw std::domain_error("fsk_coherent_ber: gamma_b must be non-negative");
  return q_func(std::sqrt(gamma_b));
}

std::string_view to_string(BerEngine e) { return e == BerEngine::Exact ? "exact" : "gaussian"; }

BerEngine parse_engine(std::string_view name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
  if (n == "exact") return BerEngine::Exact;
  if (n == "gaussian") return BerEngine::Gaussian;
  throw std::invalid_argument("unknown BER engine '" + std::string(name) + "' (expected exact or gaussian)");
}

double ber_vs_iota(std::complex<double> iota, double gamma, int m_sc, int n_chips, const SeriesControl& ctl,
                   BerEngine engine) {
  if (!std::isfinite(iota.real()) || !std::isfinite(iota.imag())) throw std::domain_error("ber_vs_iota: iota not finite");
  if (!(gamma > 0.0)) throw std::domain_error("ber_vs_iota: gamma must be positive");
  DetectionParams p;
  p.m_sc = m_sc;
  p.n_chips = n_chips;
  p.noise_power = 1.0;
  p.h_off_sq = gamma;
  p.h_on_sq = gamma * std::norm(1.0 + iota);
  return engine == BerEngine::Exact ? exact_ber(p, ctl) : gaussian_ber(p);
}

double iota_magnitude_for_target(double ber_target, double gamma, int m_sc, int n_chips) {
  if (!(gamma > 0.0)) throw std::domain_error("iota_magnitude_for_target: gamma must be positive");
  if (m_sc < 1 || n_chips < 1) throw std::domain_error("iota_magnitude_for_target: m_sc and n_chips must be positive");
  if (ber_target == 0.5) return 1.0;
  if (!(ber_target > 0.0 && ber_target < 0.5)) {
    throw std::domain_error("iota_magnitude_for_target: target must lie in (0, 0.5)");
  }
  // With sigma^2 = 1, off = gamma, on = gamma r and t = r - 1, the Gaussian BER
  // equals the target when N M gamma^2 t^2 = 4 q^2 (1 + 2 gamma + gamma t).
  const double q = q_inv(ber_target);
  const double nm = static_cast<double>(n_chips) * m_sc;
  const double t = (2.0 * q * q + 2.0 * q * std::sqrt(q * q + nm * (1.0 + 2.0 * gamma))) / (nm * gamma);
  return 1.0 + t;
}

}  // namespace ambc
