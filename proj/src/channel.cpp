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

#include "ambc/channel.hpp"

namespace ambc {

void ChannelSet::validate() const {
  if (!(noise_power > 0.0)) throw std::domain_error("ChannelSet: noise power must be positive");
  if (!(bd_modulation_depth > 0.0 && bd_modulation_depth <= 1.0)) {
    throw std::domain_error("ChannelSet: modulation depth must lie in (0, 1]");
  }
}

std::complex<double> composite_gain(const ChannelSet& ch, int b) {
  if (b == -1) return ch.h_off();
  if (b == 1) return ch.h_on();
  throw std::domain_error("composite_gain: BD state must be -1 or +1");
}

double lte_snr(const ChannelSet& ch) {
  if (!(ch.noise_power > 0.0)) throw std::domain_error("lte_snr: noise power must be positive");
  return std::norm(ch.h_d) / ch.noise_power;
}

double snr_per_bit(const ChannelSet& ch, int n_chips, int m_sc) {
  if (n_chips < 1 || m_sc < 1) throw std::domain_error("snr_per_bit: N and M_sc must be positive");
  const double on = ch.on_power();
  const double off = ch.off_power();
  const double s2 = ch.noise_power;
  const double diff = on - off;
  return n_chips * static_cast<double>(m_sc) * diff * diff / (8.0 * s2 * (s2 + on + off));
}

double noise_power_for_snr_per_bit(const ChannelSet& ch, int n_chips, int m_sc, double gamma_b) {
  if (n_chips < 1 || m_sc < 1) throw std::domain_error("noise_power_for_snr_per_bit: N and M_sc must be positive");
  if (!(gamma_b > 0.0)) throw std::domain_error("noise_power_for_snr_per_bit: gamma_b must be positive");
  const double on = ch.on_power();
  const double off = ch.off_power();
  const double sum = on + off;
  const double c = n_chips * static_cast<double>(m_sc) * (on - off) * (on - off) / (8.0 * gamma_b);
  if (!(c > 0.0)) throw std::domain_error("noise_power_for_snr_per_bit: no backscatter energy");
  // sigma^4 + sum sigma^2 - c = 0
  return 2.0 * c / (sum + std::sqrt(sum * sum + 4.0 * c));
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

double from_db(double db) { return std::pow(10.0, db / 10.0); }

ChannelSet channel_from_attenuations(double direct_db, double scatter_db, double gamma_linear,
                                     double scatter_phase_rad) {
  if (!(gamma_linear > 0.0)) throw std::domain_error("channel_from_attenuations: gamma must be positive");
  ChannelSet ch;
  ch.h_d = {std::sqrt(from_db(direct_db)), 0.0};
  ch.h_s = std::polar(std::sqrt(from_db(scatter_db)), scatter_phase_rad);
  ch.h_b = {1.0, 0.0};
  ch.noise_power = std::norm(ch.h_d) / gamma_linear;
  return ch;
}

ChannelSet channel_from_geometry(const LinkGeometry<double>& geom, double lambda, double gamma_linear) {
  if (!(gamma_linear > 0.0)) throw std::domain_error("channel_from_geometry: gamma must be positive");
  ChannelSet ch;
  ch.h_d = fspl_gain(geom.d_d(), lambda);
  ch.h_s = fspl_gain(geom.d_s(), lambda);
  ch.h_b = fspl_gain(geom.d_b(), lambda);
  ch.noise_power = std::norm(ch.h_d) / gamma_linear;
  return ch;
}

double modulation_depth_from_return_loss(double reflect_loss_db, double absorb_loss_db) {
  return std::pow(10.0, -reflect_loss_db / 20.0) - std::pow(10.0, -absorb_loss_db / 20.0);
}

}  // namespace ambc
