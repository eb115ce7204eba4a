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

#ifndef AMBC_LTE_GRID_HPP
#define AMBC_LTE_GRID_HPP

#include <complex>

#include <Eigen/Core>

#include "ambc/random.hpp"

namespace ambc {

/// LTE uplink numerology and SRS schedule.
struct SrsConfig {
  int num_rb = 50;
  double subcarrier_spacing_hz = 15e3;
  int m_sc = 288;          // SRS subcarriers per SRS symbol
  double t_srs_s = 2e-3;   // SRS period; the backscatter sampling interval
  double carrier_freq_hz = 782e6;
  double bandwidth_hz = 10e6;

  [[nodiscard]] double wavelength_m() const;
  [[nodiscard]] double bd_sample_rate_hz() const { return 1.0 / t_srs_s; }
  /// Throws std::invalid_argument on m_sc < 24 or non-positive fields.
  void validate() const;
};

SrsConfig default_config();

/// One SRS symbol in the frequency domain: m_sc unit-modulus resource elements.
struct SrsSymbol {
  Eigen::VectorXcd res;
  long symbol_index = 0;
};

/// Received SRS energy y[l] = sum_k |S_r[k;l]|^2.
struct EnergySample {
  double y = 0.0;
  double noise_power = 1.0;
  long symbol_index = 0;

  /// 2y / sigma_n^2, the chi-square-normalised statistic the detectors consume.
  [[nodiscard]] double normalized() const { return 2.0 * y / noise_power; }
};

/// Unit-modulus REs with uniformly random phases drawn from `rng`.
SrsSymbol gen_srs_symbol(const SrsConfig& cfg, long l, Rng& rng);

/// Per-RE synthesis: S_r = h S_t + CN(0, noise_power), then y = sum |S_r|^2.
EnergySample receive_symbol(const SrsSymbol& sym, std::complex<double> h, double noise_power, Rng& rng);

/// Samples y directly from its law: 2y/sigma^2 ~ chi'^2_{2 m_sc}(2 m_sc |h|^2 / sigma^2).
EnergySample energy_statistic_direct(std::complex<double> h, const SrsConfig& cfg, double noise_power,
                                     Rng& rng, long l = 0);

/// Samples y from the moment-matched Gaussian N(m_sc(s2+|h|^2), m_sc(s2^2 + 2 s2 |h|^2)).
EnergySample energy_statistic_gaussian(std::complex<double> h, const SrsConfig& cfg, double noise_power,
                                       Rng& rng, long l = 0);

/// Mean and variance of y for a given channel power.
double energy_mean(int m_sc, double channel_power, double noise_power);
double energy_variance(int m_sc, double channel_power, double noise_power);

}  // namespace ambc

#endif  // AMBC_LTE_GRID_HPP
