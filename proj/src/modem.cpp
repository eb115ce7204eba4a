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

#include "ambc/modem.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "ambc/specfun.hpp"

namespace ambc {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

Eigen::VectorXd square_wave(int n_chips, int half_period) {
  Eigen::VectorXd v(n_chips);
  for (int i = 0; i < n_chips; ++i) v[i] = ((i / half_period) % 2 == 0) ? -1.0 : 1.0;
  return v;
}

}  // namespace

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::BPSK: return "bpsk";
    case Scheme::FSK: return "fsk";
    case Scheme::DBPSK: return "dbpsk";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  const std::string n = lower(name);
  if (n == "bpsk") return Scheme::BPSK;
  if (n == "fsk") return Scheme::FSK;
  if (n == "dbpsk" || n == "d-bpsk") return Scheme::DBPSK;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "' (expected bpsk, fsk or dbpsk)");
}

std::string_view to_string(DetectorKind k) {
  switch (k) {
    case DetectorKind::BesselMap: return "bessel";
    case DetectorKind::SquareRoot: return "sqrt";
    case DetectorKind::Correlation: return "correlation";
    case DetectorKind::Power: return "power";
  }
  return "?";
}

DetectorKind parse_detector(std::string_view name) {
  const std::string n = lower(name);
  if (n == "bessel" || n == "besselmap" || n == "map") return DetectorKind::BesselMap;
  if (n == "sqrt" || n == "squareroot") return DetectorKind::SquareRoot;
  if (n == "correlation" || n == "corr") return DetectorKind::Correlation;
  if (n == "power" || n == "square") return DetectorKind::Power;
  throw std::invalid_argument("unknown detector '" + std::string(name) +
                              "' (expected bessel, sqrt, correlation or power)");
}

void SymbolAlphabet::validate() const {
  if (n_chips < 2 || n_chips % 2 != 0) throw std::invalid_argument("alphabet: n_chips must be even and >= 2");
  if (s0.size() != n_chips || s1.size() != n_chips) throw std::invalid_argument("alphabet: waveform length != n_chips");
  for (const Eigen::VectorXd* s : {&s0, &s1}) {
    for (Eigen::Index i = 0; i < s->size(); ++i) {
      if ((*s)[i] != 1.0 && (*s)[i] != -1.0) throw std::invalid_argument("alphabet: chips must be +1 or -1");
    }
    if (s->sum() != 0.0) throw std::invalid_argument("alphabet: waveforms need equal on and off chip counts");
  }
  if (scheme == Scheme::FSK) {
    if (s0.dot(s1) != 0.0) throw std::invalid_argument("alphabet: FSK waveforms must be orthogonal");
  } else if (s1 != -s0) {
    throw std::invalid_argument("alphabet: BPSK waveforms must be antipodal");
  }
}

SymbolAlphabet make_alphabet(Scheme scheme, int n_chips) {
  if (n_chips < 2 || n_chips % 2 != 0) throw std::invalid_argument("make_alphabet: n_chips must be even and >= 2");
  SymbolAlphabet a;
  a.scheme = scheme;
  a.n_chips = n_chips;
  if (scheme == Scheme::FSK) {
    if (n_chips % 4 != 0) {
      throw std::invalid_argument("make_alphabet: FSK needs n_chips divisible by 4 for whole half-periods");
    }
    a.s0 = square_wave(n_chips, n_chips / 2);
    a.s1 = square_wave(n_chips, n_chips / 4);
  } else {
    a.s0 = square_wave(n_chips, 1);
    a.s1 = -a.s0;
  }
  a.validate();
  return a;
}

SymbolAlphabet make_fsk_alphabet(int n_chips, double f0_hz, double f1_hz, double t_chip_s) {
  auto half_period = [&](double f) {
    const double h = 0.5 / (f * t_chip_s);
    const long r = std::lround(h);
    if (!(f > 0.0) || r < 1 || std::abs(h - r) > 1e-9 * h) {
      throw std::invalid_argument("make_fsk_alphabet: half-period is not a whole number of chips");
    }
    return static_cast<int>(r);
  };
  SymbolAlphabet a;
  a.scheme = Scheme::FSK;
  a.n_chips = n_chips;
  a.s0 = square_wave(n_chips, half_period(f0_hz));
  a.s1 = square_wave(n_chips, half_period(f1_hz));
  a.validate();
  return a;
}

ChipSequence encode_bits(const SymbolAlphabet& alphabet, const std::vector<bool>& bits) {
  if (bits.empty()) throw std::invalid_argument("encode_bits: empty bit sequence");
  ChipSequence out;
  out.reserve(bits.size() * alphabet.n_chips);
  bool state = false;
  for (bool b : bits) {
    const bool sym = alphabet.scheme == Scheme::DBPSK ? (state = state != b) : b;
    const Eigen::VectorXd& w = alphabet.waveform(sym);
    for (Eigen::Index i = 0; i < w.size(); ++i) out.push_back(static_cast<int>(w[i]));
  }
  return out;
}

const std::vector<bool>& sync_pattern() {
  static const std::vector<bool> pattern = [] {
    const bool barker[7] = {true, true, true, false, false, true, false};
    const bool outer[3] = {true, true, false};
    std::vector<bool> p;
    for (bool o : outer) {
      for (bool c : barker) p.push_back(c == o);
    }
    return p;
  }();
  return pattern;
}

std::vector<bool> Frame::bits() const {
  std::vector<bool> out = sync;
  out.insert(out.end(), payload_bits.begin(), payload_bits.end());
  return out;
}

ChipSequence sync_chips(const SymbolAlphabet& alphabet) { return encode_bits(alphabet, sync_pattern()); }

ChipSequence encode_frame(const std::vector<bool>& payload, const SymbolAlphabet& alphabet,
                          const FrameOptions& opts) {
  if (payload.size() != static_cast<std::size_t>(kPayloadBits)) {
    throw std::invalid_argument("encode_frame: payload must be exactly 80 bits");
  }
  if (opts.idle_chips < 0 || (opts.idle_level != 1 && opts.idle_level != -1)) {
    throw std::invalid_argument("encode_frame: bad idle gap");
  }
  Frame f;
  f.payload_bits = payload;
  ChipSequence chips = encode_bits(alphabet, f.bits());
  chips.insert(chips.end(), opts.idle_chips, opts.idle_level);
  return chips;
}

SyncResult frame_sync(std::span<const double> chips, const SymbolAlphabet& alphabet) {
  const long n = alphabet.n_chips;
  const long frame_len = n * kFrameBits;
  const long len = static_cast<long>(chips.size());
  if (len < frame_len) throw std::invalid_argument("frame_sync: sequence shorter than one frame");

  const ChipSequence tmpl_chips = sync_chips(alphabet);
  const long t_len = static_cast<long>(tmpl_chips.size());
  Eigen::VectorXd tmpl(t_len);
  for (long i = 0; i < t_len; ++i) tmpl[i] = tmpl_chips[i];
  tmpl.array() -= tmpl.mean();
  const double t_norm = tmpl.norm();

  const long n_off = len - frame_len + 1;
  std::vector<double> corr(n_off, 0.0);
  Eigen::Map<const Eigen::VectorXd> x(chips.data(), len);
  for (long tau = 0; tau < n_off; ++tau) {
    const auto w = x.segment(tau, t_len);
    const double mean = w.mean();
    const double ss = (w.array() - mean).square().sum();
    if (!(ss > 0.0)) continue;
    corr[tau] = std::abs(tmpl.dot(w)) / (t_norm * std::sqrt(ss));
  }

  SyncResult r;
  const auto best = std::max_element(corr.begin(), corr.end());
  r.peak = *best;
  if (!(r.peak > 0.0)) {
    r.diagnostic = "flat input: no correlation with the sync header";
    return r;
  }
  const long peak_at = static_cast<long>(best - corr.begin());
  double s = 0.0;
  double s2 = 0.0;
  long count = 0;
  for (long tau = 0; tau < n_off; ++tau) {
    if (std::abs(tau - peak_at) < n) continue;
    s += corr[tau];
    s2 += corr[tau] * corr[tau];
    ++count;
  }
  if (count < 2) {
    r.psr = std::numeric_limits<double>::infinity();
  } else {
    const double mean = s / count;
    const double var = std::max(0.0, (s2 - count * mean * mean) / (count - 1));
    r.psr = var > 0.0 ? (r.peak - mean) / std::sqrt(var) : std::numeric_limits<double>::infinity();
  }
  if (r.psr < kMinPeakToSidelobe) {
    r.diagnostic = "peak-to-sidelobe ratio below threshold";
    return r;
  }
  r.offset = peak_at;
  return r;
}

Detector::Detector(DetectorKind kind, const SymbolAlphabet& alphabet, const ChannelSet& ch, int m_sc)
    : kind_(kind), alphabet_(alphabet), m_sc_(m_sc), delta_h_(ch.delta_h()) {
  alphabet_.validate();
  ch.validate();
  if (m_sc < 1) throw std::invalid_argument("Detector: m_sc must be positive");
  lambda_on_ = 2.0 * m_sc * ch.on_power() / ch.noise_power;
  lambda_off_ = 2.0 * m_sc * ch.off_power() / ch.noise_power;
}

double Detector::log_likelihood(double u, bool on) const {
  const double lambda = on ? lambda_on_ : lambda_off_;
  const double m = m_sc_;
  if (kind_ == DetectorKind::Power) {
    const double mean = 2.0 * m + lambda;
    const double var = 4.0 * m + 4.0 * lambda;
    return -0.5 * std::log(var) - (u - mean) * (u - mean) / (2.0 * var);
  }
  // Noncentral chi-square density with 2M degrees of freedom, constants common to
  // both hypotheses dropped.
  const double uu = std::max(u, std::numeric_limits<double>::min());
  if (lambda == 0.0) {
    return (m - 1.0) * std::log(uu) - uu / 2.0 - (m - 1.0) * std::log(2.0) - std::lgamma(m);
  }
  return -lambda / 2.0 + 0.5 * (m - 1.0) * (std::log(uu) - std::log(lambda)) +
         log_bessel_i(m_sc_ - 1, std::sqrt(lambda * uu));
}

double Detector::metric(std::span<const double> u) const {
  const Eigen::Index n = alphabet_.n_chips;
  if (static_cast<Eigen::Index>(u.size()) != n) throw std::invalid_argument("detector: expected N samples");
  const Eigen::VectorXd& s0 = alphabet_.s0;
  const Eigen::VectorXd& s1 = alphabet_.s1;
  Eigen::Map<const Eigen::VectorXd> v(u.data(), n);
  switch (kind_) {
    case DetectorKind::Correlation:
      return delta_h_ * (s0 - s1).dot(v);
    case DetectorKind::SquareRoot:
      return delta_h_ * (s0 - s1).dot(v.cwiseMax(0.0).cwiseSqrt());
    case DetectorKind::BesselMap:
    case DetectorKind::Power: {
      double l0 = 0.0;
      double l1 = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (s0[i] == s1[i]) continue;
        l0 += log_likelihood(v[i], s0[i] > 0.0);
        l1 += log_likelihood(v[i], s1[i] > 0.0);
      }
      return l0 - l1;
    }
  }
  return 0.0;
}

double detector_metric(DetectorKind kind, std::span<const double> u, const SymbolAlphabet& alphabet,
                       const ChannelSet& ch, int m_sc) {
  return Detector(kind, alphabet, ch, m_sc).metric(u);
}

bool detect(DetectorKind kind, std::span<const double> y, double noise_power, const SymbolAlphabet& alphabet,
            const ChannelSet& ch, int m_sc) {
  if (static_cast<int>(y.size()) != alphabet.n_chips) throw std::invalid_argument("detect: expected N samples");
  if (!(noise_power > 0.0)) throw std::domain_error("detect: noise power must be positive");
  std::vector<double> u(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] >= 0.0)) throw std::invalid_argument("detect: energy samples must be non-negative");
    u[i] = 2.0 * y[i] / noise_power;
  }
  return Detector(kind, alphabet, ch, m_sc).decide(u);
}

std::vector<bool> demodulate_stream(const Detector& det, std::span<const double> u, const DemodOptions& opts) {
  const std::size_t n = det.alphabet().n_chips;
  if (u.size() % n != 0) throw std::invalid_argument("demodulate_stream: length is not a multiple of N");
  if (opts.normalize_symbol_energy &&
      (det.kind() == DetectorKind::BesselMap || det.kind() == DetectorKind::Power)) {
    throw std::invalid_argument("demodulate_stream: energy normalization needs a correlation-type detector");
  }
  std::vector<bool> bits;
  bits.reserve(u.size() / n);
  std::vector<double> scratch(n);
  bool prev = false;
  for (std::size_t k = 0; k < u.size(); k += n) {
    std::span<const double> sym = u.subspan(k, n);
    if (opts.normalize_symbol_energy) {
      double mean = 0.0;
      for (double v : sym) mean += v;
      mean /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) scratch[i] = mean > 0.0 ? sym[i] / mean : 0.0;
      sym = scratch;
    }
    const bool d = det.decide(sym);
    if (det.alphabet().scheme == Scheme::DBPSK) {
      bits.push_back(d != prev);
      prev = d;
    } else {
      bits.push_back(d);
    }
  }
  return bits;
}

std::vector<bool> demodulate_stream(DetectorKind kind, std::span<const double> u, const SymbolAlphabet& alphabet,
                                    const ChannelSet& ch, int m_sc, const DemodOptions& opts) {
  return demodulate_stream(Detector(kind, alphabet, ch, m_sc), u, opts);
}

FrameDecode demodulate_frame(const Detector& det, std::span<const double> u, const DemodOptions& opts) {
  FrameDecode out;
  out.sync = frame_sync(u, det.alphabet());
  if (!out.sync.ok()) throw SyncFailure("frame sync failed: " + out.sync.diagnostic);
  const std::size_t n = det.alphabet().n_chips;
  const std::vector<bool> bits =
      demodulate_stream(det, u.subspan(static_cast<std::size_t>(*out.sync.offset), n * kFrameBits), opts);
  out.payload.assign(bits.begin() + kSyncBits, bits.end());
  return out;
}

}  // namespace ambc
