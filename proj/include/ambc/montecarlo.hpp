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

#ifndef AMBC_MONTECARLO_HPP
#define AMBC_MONTECARLO_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ambc/channel.hpp"
#include "ambc/modem.hpp"

namespace ambc {

/// How the per-chip energy is produced.
///  - ChiSquare: exact law of y sampled directly
///  - Gaussian:  moment-matched normal approximation of y
///  - PerRe:     full resource-element synthesis (SRS symbol + AWGN, then sum |.|^2)
enum class SampleModel { ChiSquare, Gaussian, PerRe };
std::string_view to_string(SampleModel m);
SampleModel parse_sample_model(std::string_view name);

/// Which SNR the sweep grid specifies.
enum class SnrAxis { Lte, PerBit };
std::string_view to_string(SnrAxis a);
SnrAxis parse_snr_axis(std::string_view name);

enum class PointSource { TheoryExact, TheoryGaussian, Simulation };
std::string_view to_string(PointSource s);

/// Scheme name as written to outputs. DBPSK carries its mapping ("1 toggles").
std::string scheme_label(Scheme s);

struct SweepConfig {
  double direct_db = -52.2;
  double scatter_db = -82.6;
  double scatter_phase_rad = 0.0;
  int m_sc = 288;
  int n_chips = 4;
  std::vector<double> snr_grid_db;
  SnrAxis axis = SnrAxis::Lte;
  long n_symbols_per_point = 10000;
  Scheme scheme = Scheme::BPSK;
  std::vector<DetectorKind> detectors{DetectorKind::Correlation};
  std::uint64_t seed = 1;
  SampleModel sample_model = SampleModel::ChiSquare;
  bool theory = true;  // append theory points to run_ber_sweep output
  unsigned threads = 1;

  /// Throws std::invalid_argument on a malformed config.
  void validate() const;
};

struct BerPoint {
  double gamma_db = 0.0;
  double gamma_b_db = 0.0;
  double ber = 0.0;
  long n_errors = 0;
  long n_bits = 0;
  std::string receiver;  // detector name, or "theory"
  Scheme scheme = Scheme::BPSK;
  PointSource source = PointSource::Simulation;
  double ci_low = 0.0;  // 95% Wilson interval (simulation points only)
  double ci_high = 0.0;
};

/// Wilson score interval for k successes in n trials.
std::pair<double, double> wilson_interval(long k, long n, double z = 1.959963984540054);

/// Channel for one sweep point (paths fixed, noise set by the grid value).
ChannelSet sweep_channel(const SweepConfig& cfg, double snr_db);

/// Simulation points for every (snr, detector), then theory points (BPSK and FSK only;
/// FSK theory is the BPSK expression with N/2 chips, DBPSK has none).
std::vector<BerPoint> run_ber_sweep(const SweepConfig& cfg);

struct ComparisonPoint {
  double gamma_db = 0.0;
  double gamma_b_db = 0.0;
  long n_bits = 0;
  std::vector<BerPoint> per_detector;
  /// disagreements(a, b): bits on which detectors a and b decided differently.
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> disagreements;
};

struct ComparisonResult {
  std::vector<DetectorKind> detectors;
  std::vector<ComparisonPoint> points;
};

/// All detectors see the same realizations. Requires >= 2 detectors.
ComparisonResult compare_receivers(const SweepConfig& cfg);

struct ReplicateConfig {
  double direct_db = -52.2;
  double scatter_db = -82.6;
  int m_sc = 288;
  int n_chips = 20;           // 40 ms symbols at the 2 ms SRS period
  double f0_hz = 125.0;       // bit 0 square wave
  double f1_hz = 250.0;       // bit 1 square wave
  double t_chip_s = 2e-3;
  int idle_chips = 250;       // 0.5 s gap between looped frames
  long n_packets = 4000;
  double gamma_b_min_db = 2.0;  // per-packet SNR per bit drawn uniformly in dB
  double gamma_b_max_db = 12.0;
  double bin_width_db = 0.25;
  DetectorKind detector = DetectorKind::Correlation;
  SampleModel sample_model = SampleModel::ChiSquare;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  void validate() const;
};

struct PacketRecord {
  long index = 0;
  double gamma_b_db = 0.0;
  long true_offset = 0;
  long sync_offset = -1;  // -1 when sync failed
  double psr = 0.0;
  int bit_errors = 0;     // payload only; 0 for failed sync
  int bits = 0;           // 80, or 0 for failed sync
};

struct ReplicateResult {
  /// Per bin: one simulation point (gamma_b_db = bin centre), then one theory point
  /// q_func(sqrt(gamma_b)) at the centre. Empty bins are omitted.
  std::vector<BerPoint> bins;
  std::vector<PacketRecord> packets;
  long sync_failures = 0;
  long wrong_sync = 0;  // synced at an offset other than the true one
};

ReplicateResult replicate_measurement(const ReplicateConfig& cfg);

}  // namespace ambc

#endif  // AMBC_MONTECARLO_HPP
