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

#ifndef AMBC_MODEM_HPP
#define AMBC_MODEM_HPP

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ambc/channel.hpp"

namespace ambc {

enum class Scheme { BPSK, FSK, DBPSK };

std::string_view to_string(Scheme s);
/// Case-insensitive; throws std::invalid_argument for unknown names.
Scheme parse_scheme(std::string_view name);

/// Chip waveforms for the two BD symbols. Chips are +1 (reflect, "on") or -1 (absorb, "off").
struct SymbolAlphabet {
  Scheme scheme = Scheme::BPSK;
  int n_chips = 4;
  Eigen::VectorXd s0;
  Eigen::VectorXd s1;

  /// Throws std::invalid_argument if the chips are not +-1, unbalanced, or the
  /// scheme-specific relation (antipodal / orthogonal) does not hold.
  void validate() const;
  [[nodiscard]] const Eigen::VectorXd& waveform(bool bit) const { return bit ? s1 : s0; }
};

/// BPSK and DBPSK: alternating chips starting at -1, s1 = -s0.
/// FSK: square waves of one (s0) and two (s1) periods per symbol; n_chips % 4 == 0.
SymbolAlphabet make_alphabet(Scheme scheme, int n_chips);

/// FSK square waves at f0 and f1 sampled every t_chip_s seconds, starting on the
/// off half-period. Both half-periods must be whole chip counts dividing n_chips.
SymbolAlphabet make_fsk_alphabet(int n_chips, double f0_hz, double f1_hz, double t_chip_s);

using ChipSequence = std::vector<int>;

/// Concatenated chip vectors. DBPSK: bit 1 toggles the waveform, bit 0 repeats
/// it; the reference before the first bit is s0.
ChipSequence encode_bits(const SymbolAlphabet& alphabet, const std::vector<bool>& bits);

inline constexpr int kSyncBits = 21;
inline constexpr int kPayloadBits = 80;
inline constexpr int kFrameBits = kSyncBits + kPayloadBits;

/// Three 7-chip Barker codes with outer polarity (+, +, -). true stands for a +1 Barker chip.
const std::vector<bool>& sync_pattern();

struct Frame {
  std::vector<bool> sync = sync_pattern();
  std::vector<bool> payload_bits;
  double symbol_period_s = 40e-3;

  [[nodiscard]] int bit_count() const { return static_cast<int>(sync.size() + payload_bits.size()); }
  [[nodiscard]] double duration_s() const { return bit_count() * symbol_period_s; }
  [[nodiscard]] std::vector<bool> bits() const;
};

struct FrameOptions {
  int idle_chips = 0;  // appended after the frame
  int idle_level = -1;
};

/// Sync header followed by the payload, both encoded with `alphabet`, then the idle gap.
/// Throws std::invalid_argument unless payload has exactly 80 bits.
ChipSequence encode_frame(const std::vector<bool>& payload, const SymbolAlphabet& alphabet,
                          const FrameOptions& opts = {});

/// Chip template of the encoded sync header.
ChipSequence sync_chips(const SymbolAlphabet& alphabet);

struct SyncResult {
  std::optional<long> offset;  // empty when sync is declared failed
  double peak = 0.0;           // |normalized correlation| at the chosen offset
  double psr = 0.0;            // (peak - sidelobe mean) / sidelobe std
  std::string diagnostic;

  [[nodiscard]] bool ok() const { return offset.has_value(); }
};

inline constexpr double kMinPeakToSidelobe = 2.0;

/// Locate the sync header in a per-chip soft sequence (e.g. normalized energies).
///
/// The template is mean-removed and correlated against each mean-removed window;
/// the offset maximizes |correlation| over starts that leave room for a whole frame.
/// Shifts within one symbol of the peak are main lobe; the rest are sidelobes.
/// Fails on a flat input or when the peak-to-sidelobe ratio is below 2.
/// Throws std::invalid_argument when the sequence is shorter than one frame.
SyncResult frame_sync(std::span<const double> chips, const SymbolAlphabet& alphabet);

class SyncFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DetectorKind { BesselMap, SquareRoot, Correlation, Power };

std::string_view to_string(DetectorKind k);
DetectorKind parse_detector(std::string_view name);

/// Per-symbol hypothesis test on N normalized energies u = 2y / sigma_n^2.
///
/// metric() returns L0 - L1; H0 (bit 0) is chosen when it is >= 0.
///  - Correlation: dh * sum (s0 - s1) u
///  - SquareRoot:  dh * sum (s0 - s1) sqrt(u)
///  - BesselMap:   exact noncentral chi-square log-likelihood ratio, 2M degrees of
///                 freedom, noncentrality 2M|h|^2 / sigma_n^2 per chip state
///  - Power:       Gaussian log-likelihood ratio with the moments of u
/// where dh = |h_on| - |h_off|.
class Detector {
 public:
  Detector(DetectorKind kind, const SymbolAlphabet& alphabet, const ChannelSet& ch, int m_sc);

  [[nodiscard]] double metric(std::span<const double> u) const;
  /// true means H1 (bit 1).
  [[nodiscard]] bool decide(std::span<const double> u) const { return metric(u) < 0.0; }
  [[nodiscard]] DetectorKind kind() const { return kind_; }
  [[nodiscard]] const SymbolAlphabet& alphabet() const { return alphabet_; }

 private:
  [[nodiscard]] double log_likelihood(double u, bool on) const;

  DetectorKind kind_;
  SymbolAlphabet alphabet_;
  int m_sc_;
  double delta_h_;
  double lambda_on_;
  double lambda_off_;
};

double detector_metric(DetectorKind kind, std::span<const double> u, const SymbolAlphabet& alphabet,
                       const ChannelSet& ch, int m_sc);

/// Decision from raw energy samples; throws std::invalid_argument on a length
/// mismatch or a negative sample.
bool detect(DetectorKind kind, std::span<const double> y, double noise_power, const SymbolAlphabet& alphabet,
            const ChannelSet& ch, int m_sc);

struct DemodOptions {
  /// Divide each symbol's energies by their mean before the detector sees them.
  /// Only valid for Correlation and SquareRoot, whose decisions it cannot change
  /// (both are invariant to a positive per-symbol scale).
  bool normalize_symbol_energy = false;
};

/// One bit per N normalized energies. DBPSK decisions are differentially decoded
/// against an s0 reference. Throws std::invalid_argument unless the length is a
/// multiple of N.
std::vector<bool> demodulate_stream(const Detector& det, std::span<const double> u,
                                    const DemodOptions& opts = {});

std::vector<bool> demodulate_stream(DetectorKind kind, std::span<const double> u, const SymbolAlphabet& alphabet,
                                    const ChannelSet& ch, int m_sc, const DemodOptions& opts = {});

struct FrameDecode {
  SyncResult sync;
  std::vector<bool> payload;
};

/// frame_sync followed by demodulation of the 80 payload bits. Throws SyncFailure
/// when sync is declared failed.
FrameDecode demodulate_frame(const Detector& det, std::span<const double> u, const DemodOptions& opts = {});

}  // namespace ambc

#endif  // AMBC_MODEM_HPP
