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

#include "ambc/lte_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace ambc {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

void require_noise(double noise_power) {
  if (!(noise_power > 0.0) || !std::isfinite(noise_power)) {
    throw std::domain_error("noise power must be positive");
  }
}

}  // namespace

double SrsConfig::wavelength_m() const { return kSpeedOfLight / carrier_freq_hz; }

void SrsConfig::validate() const {
  if (m_sc < 24) throw std::invalid_argument("SrsConfig: m_sc must be at least 24");
  if (num_rb <= 0) throw std::invalid_argument("SrsConfig: num_rb must be positive");
  if (!(subcarrier_spacing_hz > 0.0)) throw std::invalid_argument("SrsConfig: subcarrier spacing must be positive");
  if (!(t_srs_s > 0.0)) throw std::invalid_argument("SrsConfig: t_srs must be positive");
  if (!(carrier_freq_hz > 0.0)) throw std::invalid_argument("SrsConfig: carrier frequency must be positive");
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("SrsConfig: bandwidth must be positive");
}

SrsConfig default_config() { return SrsConfig{}; }

SrsSymbol gen_srs_symbol(const SrsConfig& cfg, long l, Rng& rng) {
  if (l < 0) throw std::invalid_argument("gen_srs_symbol: negative symbol index");
  boost::random::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  SrsSymbol sym;
  sym.symbol_index = l;
  sym.res.resize(cfg.m_sc);
  for (Eigen::Index k = 0; k < sym.res.size(); ++k) {
    sym.res[k] = std::polar(1.0, phase(rng));
  }
  return sym;
}

EnergySample receive_symbol(const SrsSymbol& sym, std::complex<double> h, double noise_power, Rng& rng) {
  require_noise(noise_power);
  boost::random::normal_distribution<double> noise(0.0, std::sqrt(noise_power / 2.0));
  double y = 0.0;
  for (Eigen::Index k = 0; k < sym.res.size(); ++k) {
    const double re = noise(rng);
    const double im = noise(rng);
    y += std::norm(h * sym.res[k] + std::complex<double>(re, im));
  }
  return {y, noise_power, sym.symbol_index};
}

EnergySample energy_statistic_direct(std::complex<double> h, const SrsConfig& cfg, double noise_power,
                                     Rng& rng, long l) {
  require_noise(noise_power);
  // chi'^2_k(lambda) = (Z + sqrt(lambda))^2 + chi^2_{k-1}, chi^2_{k-1} = 2 Gamma((k-1)/2).
  const double lambda = 2.0 * cfg.m_sc * std::norm(h) / noise_power;
  boost::random::normal_distribution<double> z(0.0, 1.0);
  boost::random::gamma_distribution<double> g(cfg.m_sc - 0.5, 1.0);
  const double shifted = z(rng) + std::sqrt(lambda);
  const double normalized = shifted * shifted + 2.0 * g(rng);
  return {0.5 * noise_power * normalized, noise_power, l};
}

EnergySample energy_statistic_gaussian(std::complex<double> h, const SrsConfig& cfg, double noise_power,
                                       Rng& rng, long l) {
  require_noise(noise_power);
  const double g = std::norm(h);
  boost::random::normal_distribution<double> dist(energy_mean(cfg.m_sc, g, noise_power),
                                                  std::sqrt(energy_variance(cfg.m_sc, g, noise_power)));
  return {std::max(0.0, dist(rng)), noise_power, l};
}

double energy_mean(int m_sc, double channel_power, double noise_power) {
  return m_sc * (noise_power + channel_power);
}

double energy_variance(int m_sc, double channel_power, double noise_power) {
  return m_sc * (noise_power * noise_power + 2.0 * noise_power * channel_power);
}

}  // namespace ambc
