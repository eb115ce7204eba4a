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

#ifndef AMBC_CHANNEL_HPP
#define AMBC_CHANNEL_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Core>

namespace ambc {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

/// Positions of base station, UE and backscatter device (meters, 2D).
template <typename Scalar = double>
struct LinkGeometry {
  Point2<Scalar> bs_pos = Point2<Scalar>::Zero();
  Point2<Scalar> ue_pos = Point2<Scalar>::Zero();
  Point2<Scalar> bd_pos = Point2<Scalar>::Zero();

  /// UE -> BS
  [[nodiscard]] Scalar d_d() const { return (ue_pos - bs_pos).norm(); }
  /// UE -> BD
  [[nodiscard]] Scalar d_s() const { return (ue_pos - bd_pos).norm(); }
  /// BD -> BS
  [[nodiscard]] Scalar d_b() const { return (bd_pos - bs_pos).norm(); }

  [[nodiscard]] LinkGeometry scaled(Scalar factor) const {
    return {bs_pos * factor, ue_pos * factor, bd_pos * factor};
  }
};

/// Free-space complex gain (lambda / 4 pi d) exp(j 2 pi d / lambda).
template <typename Scalar>
std::complex<Scalar> fspl_gain(Scalar d, Scalar lambda) {
  if (!(d > Scalar(0))) throw std::domain_error("fspl_gain: distance must be positive");
  if (!(lambda > Scalar(0))) throw std::domain_error("fspl_gain: wavelength must be positive");
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  const Scalar phase = std::fmod(two_pi * d / lambda, two_pi);
  return std::polar(lambda / (Scalar(2) * two_pi * d), phase);
}

/// Direct and scattered path gains plus the noise floor.
struct ChannelSet {
  std::complex<double> h_d{1.0, 0.0};
  std::complex<double> h_s{0.0, 0.0};
  std::complex<double> h_b{1.0, 0.0};
  double bd_modulation_depth = 1.0;  // amplitude factor of the reflected state, (0, 1]
  double noise_power = 1.0;

  [[nodiscard]] std::complex<double> scattered() const { return h_s * h_b; }
  [[nodiscard]] std::complex<double> h_on() const { return h_d + bd_modulation_depth * scattered(); }
  [[nodiscard]] std::complex<double> h_off() const { return h_d; }
  [[nodiscard]] double on_power() const { return std::norm(h_on()); }
  [[nodiscard]] double off_power() const { return std::norm(h_d); }
  /// |h_on| - |h_off|; its sign orients the BPSK decision.
  [[nodiscard]] double delta_h() const { return std::abs(h_on()) - std::abs(h_d); }
  void validate() const;
};

/// h for BD state b: -1 -> h_d ("off"), +1 -> h_d + depth h_s h_b ("on").
std::complex<double> composite_gain(const ChannelSet& ch, int b);

/// Complex scatter-to-direct ratio h_s h_b / h_d.
struct ScatterRatio {
  std::complex<double> iota{0.0, 0.0};

  /// |1 + iota|^2
  [[nodiscard]] double on_off_power_ratio() const { return std::norm(1.0 + iota); }
};

/// iota from geometry. Throws std::domain_error when the BD coincides with the UE or BS.
template <typename Scalar>
ScatterRatio scatter_ratio(const LinkGeometry<Scalar>& geom, Scalar lambda) {
  const Scalar dd = geom.d_d();
  const Scalar ds = geom.d_s();
  const Scalar db = geom.d_b();
  if (!(ds > Scalar(0)) || !(db > Scalar(0)) || !(dd > Scalar(0))) {
    throw std::domain_error("scatter_ratio: degenerate geometry (coincident nodes)");
  }
  if (!(lambda > Scalar(0))) throw std::domain_error("scatter_ratio: wavelength must be positive");
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  const Scalar magnitude = lambda / (Scalar(2) * two_pi) * dd / (ds * db);
  const Scalar phase = two_pi * (dd - db - ds) / lambda;
  const auto v = std::polar(magnitude, phase);
  return {{static_cast<double>(v.real()), static_cast<double>(v.imag())}};
}

/// LTE SNR gamma = |h_d|^2 / sigma_n^2 (linear).
double lte_snr(const ChannelSet& ch);

/// SNR per backscatter bit,
/// gamma_b = N M (|h_on|^2 - |h_off|^2)^2 / (8 s2 (s2 + |h_on|^2 + |h_off|^2)).
double snr_per_bit(const ChannelSet& ch, int n_chips, int m_sc);

/// Noise power at which snr_per_bit(ch, n_chips, m_sc) equals gamma_b (the
/// positive root of the quadratic in sigma_n^2). Ignores ch.noise_power.
double noise_power_for_snr_per_bit(const ChannelSet& ch, int n_chips, int m_sc, double gamma_b);

double to_db(double linear);
double from_db(double db);

/// Channel with fixed path attenuations (power dB) and noise set for a target LTE SNR.
/// The scattered path is h_s with h_b = 1, rotated by `scatter_phase_rad` relative to h_d.
ChannelSet channel_from_attenuations(double direct_db, double scatter_db, double gamma_linear,
                                     double scatter_phase_rad = 0.0);

/// FSPL channel for a geometry, with noise set for a target LTE SNR.
ChannelSet channel_from_geometry(const LinkGeometry<double>& geom, double lambda, double gamma_linear);

/// Reflection-state amplitude difference for a BD with the given return losses (dB).
double modulation_depth_from_return_loss(double reflect_loss_db, double absorb_loss_db);

}  // namespace ambc

#endif  // AMBC_CHANNEL_HPP
