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

#include "ambc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "ambc/ber_theory.hpp"
#include "ambc/lte_grid.hpp"
#include "ambc/parallel.hpp"
#include "ambc/random.hpp"

namespace ambc {

namespace {

constexpr long kBlockBits = 500;
constexpr std::uint64_t kSweepStream = 0x5357;
constexpr std::uint64_t kReplicateStream = 0x5250;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

double chip_energy(SampleModel model, std::complex<double> h, const SrsConfig& cfg, double noise, Rng& rng,
                   long l) {
  switch (model) {
    case SampleModel::ChiSquare: return energy_statistic_direct(h, cfg, noise, rng, l).normalized();
    case SampleModel::Gaussian: return energy_statistic_gaussian(h, cfg, noise, rng, l).normalized();
    case SampleModel::PerRe: break;
  }
  const SrsSymbol sym = gen_srs_symbol(cfg, l, rng);
  return receive_symbol(sym, h, noise, rng).normalized();
}

std::vector<double> chip_energies(const ChipSequence& chips, const ChannelSet& ch, const SrsConfig& cfg,
                                  SampleModel model, Rng& rng) {
  const std::complex<double> h_on = composite_gain(ch, +1);
  const std::complex<double> h_off = composite_gain(ch, -1);
  std::vector<double> u(chips.size());
  for (std::size_t i = 0; i < chips.size(); ++i)
    u[i] = chip_energy(model, chips[i] > 0 ? h_on : h_off, cfg, ch.noise_power, rng, static_cast<long>(i));
  return u;
}

SrsConfig srs_for(int m_sc) {
  SrsConfig cfg = default_config();
  cfg.m_sc = m_sc;
  return cfg;
}

BerPoint sim_point(double gamma_db, double gamma_b_db, long errors, long bits, std::string receiver, Scheme s) {
  BerPoint p;
  p.gamma_db = gamma_db;
  p.gamma_b_db = gamma_b_db;
  p.n_errors = errors;
  p.n_bits = bits;
  p.ber = bits > 0 ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0;
  p.receiver = std::move(receiver);
  p.scheme = s;
  p.source = PointSource::Simulation;
  std::tie(p.ci_low, p.ci_high) = wilson_interval(errors, bits);
  return p;
}

BerPoint theory_point(double gamma_db, double gamma_b_db, double ber, PointSource src, Scheme s) {
  BerPoint p;
  p.gamma_db = gamma_db;
  p.gamma_b_db = gamma_b_db;
  p.ber = ber;
  p.receiver = "theory";
  p.scheme = s;
  p.source = src;
  p.ci_low = p.ci_high = ber;
  return p;
}

// Errors per detector and pairwise disagreements at one sweep point.
struct PointTally {
  std::vector<long> errors;
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> disagree;
  long bits = 0;
};

PointTally simulate_point(const SweepConfig& cfg, const ChannelSet& ch, long point_index) {
  const SymbolAlphabet alphabet = make_alphabet(cfg.scheme, cfg.n_chips);
  const SrsConfig srs = srs_for(cfg.m_sc);
  const std::size_t nd = cfg.detectors.size();
  std::vector<Detector> dets;
  for (DetectorKind k : cfg.detectors) dets.emplace_back(k, alphabet, ch, cfg.m_sc);

  const long n_blocks = (cfg.n_symbols_per_point + kBlockBits - 1) / kBlockBits;
  std::vector<PointTally> blocks(n_blocks);
  parallel_for(n_blocks, cfg.threads, [&](long b) {
    const long n_bits = std::min(kBlockBits, cfg.n_symbols_per_point - b * kBlockBits);
    Rng rng(derive_seed(cfg.seed, {kSweepStream, static_cast<std::uint64_t>(point_index),
                                   static_cast<std::uint64_t>(b)}));
    std::vector<bool> bits(n_bits);
    for (long i = 0; i < n_bits; ++i) bits[i] = (rng() >> 63) != 0;
    const auto u = chip_energies(encode_bits(alphabet, bits), ch, srs, cfg.sample_model, rng);

    std::vector<std::vector<bool>> decided;
    decided.reserve(nd);
    for (const auto& d : dets) decided.push_back(demodulate_stream(d, u));
    PointTally t;
    t.bits = n_bits;
    t.errors.assign(nd, 0);
    t.disagree = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>::Zero(nd, nd);
    for (std::size_t a = 0; a < nd; ++a) {
      for (long i = 0; i < n_bits; ++i) t.errors[a] += decided[a][i] != bits[i];
      for (std::size_t c = a + 1; c < nd; ++c) {
        long diff = 0;
        for (long i = 0; i < n_bits; ++i) diff += decided[a][i] != decided[c][i];
        t.disagree(a, c) = t.disagree(c, a) = diff;
      }
    }
    blocks[b] = std::move(t);
  });

  PointTally total;
  total.errors.assign(nd, 0);
  total.disagree = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>::Zero(nd, nd);
  for (const auto& t : blocks) {
    total.bits += t.bits;
    for (std::size_t a = 0; a < nd; ++a) total.errors[a] += t.errors[a];
    total.disagree += t.disagree;
  }
  return total;
}

}  // namespace

std::string_view to_string(SampleModel m) {
  switch (m) {
    case SampleModel::ChiSquare: return "chi2";
    case SampleModel::Gaussian: return "gaussian";
    case SampleModel::PerRe: return "per-re";
  }
  return "?";
}

SampleModel parse_sample_model(std::string_view name) {
  const std::string n = lower(name);
  if (n == "chi2") return SampleModel::ChiSquare;
  if (n == "gaussian") return SampleModel::Gaussian;
  if (n == "per-re") return SampleModel::PerRe;
  throw std::invalid_argument("unknown sample model: " + n + " (chi2, gaussian, per-re)");
}

std::string_view to_string(SnrAxis a) { return a == SnrAxis::Lte ? "gamma" : "gamma_b"; }

SnrAxis parse_snr_axis(std::string_view name) {
  const std::string n = lower(name);
  if (n == "gamma") return SnrAxis::Lte;
  if (n == "gamma_b") return SnrAxis::PerBit;
  throw std::invalid_argument("unknown SNR axis: " + n + " (gamma, gamma_b)");
}

std::string_view to_string(PointSource s) {
  switch (s) {
    case PointSource::TheoryExact: return "theory_exact";
    case PointSource::TheoryGaussian: return "theory_gaussian";
    case PointSource::Simulation: return "simulation";
  }
  return "?";
}

std::string scheme_label(Scheme s) {
  if (s == Scheme::DBPSK) return "dbpsk(1=toggle)";
  return std::string(to_string(s));
}

std::pair<double, double> wilson_interval(long k, long n, double z) {
  if (n <= 0) return {0.0, 1.0};
  const double nd = static_cast<double>(n);
  const double p = static_cast<double>(k) / nd;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * nd)) / (1.0 + z2 / nd);
  const double half = z * std::sqrt(p * (1.0 - p) / nd + z2 / (4.0 * nd * nd)) / (1.0 + z2 / nd);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

void SweepConfig::validate() const {
  if (snr_grid_db.empty()) throw std::invalid_argument("SweepConfig: empty SNR grid");
  for (std::size_t i = 0; i < snr_grid_db.size(); ++i) {
    if (!std::isfinite(snr_grid_db[i])) throw std::invalid_argument("SweepConfig: non-finite SNR grid value");
    if (i > 0 && !(snr_grid_db[i] > snr_grid_db[i - 1]))
      throw std::invalid_argument("SweepConfig: SNR grid must be strictly increasing");
  }
  if (n_symbols_per_point < 100) throw std::invalid_argument("SweepConfig: need at least 100 symbols per point");
  if (detectors.empty()) throw std::invalid_argument("SweepConfig: no detectors listed");
  if (m_sc < 1 || n_chips < 1) throw std::invalid_argument("SweepConfig: m_sc and n_chips must be positive");
  if (!std::isfinite(direct_db) || !std::isfinite(scatter_db))
    throw std::invalid_argument("SweepConfig: path attenuations must be finite");
  srs_for(m_sc).validate();
  make_alphabet(scheme, n_chips);  // throws for an impossible alphabet
}

ChannelSet sweep_channel(const SweepConfig& cfg, double snr_db) {
  ChannelSet ch = channel_from_attenuations(cfg.direct_db, cfg.scatter_db, from_db(snr_db), cfg.scatter_phase_rad);
  if (cfg.axis == SnrAxis::PerBit)
    ch.noise_power = noise_power_for_snr_per_bit(ch, cfg.n_chips, cfg.m_sc, from_db(snr_db));
  return ch;
}

std::vector<BerPoint> run_ber_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<BerPoint> out;
  std::vector<BerPoint> theory;
  for (std::size_t p = 0; p < cfg.snr_grid_db.size(); ++p) {
    const ChannelSet ch = sweep_channel(cfg, cfg.snr_grid_db[p]);
    const double g_db = to_db(lte_snr(ch));
    const double gb_db = to_db(snr_per_bit(ch, cfg.n_chips, cfg.m_sc));
    const PointTally t = simulate_point(cfg, ch, static_cast<long>(p));
    for (std::size_t d = 0; d < cfg.detectors.size(); ++d)
      out.push_back(sim_point(g_db, gb_db, t.errors[d], t.bits, std::string(to_string(cfg.detectors[d])),
                              cfg.scheme));
    if (cfg.theory && cfg.scheme != Scheme::DBPSK) {
      DetectionParams dp;
      dp.m_sc = cfg.m_sc;
      dp.n_chips = cfg.scheme == Scheme::FSK ? cfg.n_chips / 2 : cfg.n_chips;
      dp.h_on_sq = ch.on_power();
      dp.h_off_sq = ch.off_power();
      dp.noise_power = ch.noise_power;
      theory.push_back(theory_point(g_db, gb_db, exact_ber(dp), PointSource::TheoryExact, cfg.scheme));
      theory.push_back(theory_point(g_db, gb_db, gaussian_ber(dp), PointSource::TheoryGaussian, cfg.scheme));
    }
  }
  out.insert(out.end(), theory.begin(), theory.end());
  return out;
}

ComparisonResult compare_receivers(const SweepConfig& cfg) {
  cfg.validate();
  if (cfg.detectors.size() < 2) throw std::invalid_argument("compare_receivers: need at least two detectors");
  ComparisonResult res;
  res.detectors = cfg.detectors;
  for (std::size_t p = 0; p < cfg.snr_grid_db.size(); ++p) {
    const ChannelSet ch = sweep_channel(cfg, cfg.snr_grid_db[p]);
    ComparisonPoint cp;
    cp.gamma_db = to_db(lte_snr(ch));
    cp.gamma_b_db = to_db(snr_per_bit(ch, cfg.n_chips, cfg.m_sc));
    const PointTally t = simulate_point(cfg, ch, static_cast<long>(p));
    cp.n_bits = t.bits;
    for (std::size_t d = 0; d < cfg.detectors.size(); ++d)
      cp.per_detector.push_back(sim_point(cp.gamma_db, cp.gamma_b_db, t.errors[d], t.bits,
                                          std::string(to_string(cfg.detectors[d])), cfg.scheme));
    cp.disagreements = t.disagree;
    res.points.push_back(std::move(cp));
  }
  return res;
}

void ReplicateConfig::validate() const {
  if (n_packets < 1) throw std::invalid_argument("ReplicateConfig: need at least one packet");
  if (!(gamma_b_max_db > gamma_b_min_db)) throw std::invalid_argument("ReplicateConfig: empty SNR range");
  if (!(bin_width_db > 0.0)) throw std::invalid_argument("ReplicateConfig: bin width must be positive");
  if (idle_chips < 0) throw std::invalid_argument("ReplicateConfig: negative idle gap");
  srs_for(m_sc).validate();
  make_fsk_alphabet(n_chips, f0_hz, f1_hz, t_chip_s).validate();
}

ReplicateResult replicate_measurement(const ReplicateConfig& cfg) {
  cfg.validate();
  const SymbolAlphabet alphabet = make_fsk_alphabet(cfg.n_chips, cfg.f0_hz, cfg.f1_hz, cfg.t_chip_s);
  const SrsConfig srs = srs_for(cfg.m_sc);
  const ChannelSet base = channel_from_attenuations(cfg.direct_db, cfg.scatter_db, 1.0);

  ReplicateResult res;
  res.packets.resize(cfg.n_packets);
  parallel_for(cfg.n_packets, cfg.threads, [&](long k) {
    Rng rng(derive_seed(cfg.seed, {kReplicateStream, static_cast<std::uint64_t>(k)}));
    PacketRecord rec;
    rec.index = k;
    rec.gamma_b_db = boost::random::uniform_real_distribution<double>(cfg.gamma_b_min_db, cfg.gamma_b_max_db)(rng);
    ChannelSet ch = base;
    ch.noise_power = noise_power_for_snr_per_bit(base, cfg.n_chips, cfg.m_sc, from_db(rec.gamma_b_db));

    std::vector<bool> payload(kPayloadBits);
    for (auto&& b : payload) b = (rng() >> 63) != 0;
    // capture window: tail of the previous idle gap, the frame, the next idle gap
    rec.true_offset = boost::random::uniform_int_distribution<long>(0, cfg.idle_chips)(rng);
    ChipSequence chips(static_cast<std::size_t>(rec.true_offset), -1);
    const ChipSequence frame = encode_frame(payload, alphabet, FrameOptions{cfg.idle_chips, -1});
    chips.insert(chips.end(), frame.begin(), frame.end());

    const auto u = chip_energies(chips, ch, srs, cfg.sample_model, rng);
    const Detector det(cfg.detector, alphabet, ch, cfg.m_sc);
    try {
      const FrameDecode fd = demodulate_frame(det, u);
      rec.sync_offset = *fd.sync.offset;
      rec.psr = fd.sync.psr;
      rec.bits = kPayloadBits;
      for (int i = 0; i < kPayloadBits; ++i) rec.bit_errors += fd.payload[i] != payload[i];
    } catch (const SyncFailure&) {
      rec.sync_offset = -1;
    }
    res.packets[k] = rec;
  });

  struct Bin {
    long errors = 0;
    long bits = 0;
  };
  std::map<long, Bin> bins;
  for (const auto& rec : res.packets) {
    if (rec.sync_offset < 0) {
      ++res.sync_failures;
      continue;
    }
    if (rec.sync_offset != rec.true_offset) ++res.wrong_sync;
    const long b = static_cast<long>(std::floor((rec.gamma_b_db - cfg.gamma_b_min_db) / cfg.bin_width_db));
    bins[b].errors += rec.bit_errors;
    bins[b].bits += rec.bits;
  }
  for (const auto& [b, bin] : bins) {
    const double centre = cfg.gamma_b_min_db + (static_cast<double>(b) + 0.5) * cfg.bin_width_db;
    ChannelSet ch = base;
    ch.noise_power = noise_power_for_snr_per_bit(base, cfg.n_chips, cfg.m_sc, from_db(centre));
    const double g_db = to_db(lte_snr(ch));
    res.bins.push_back(sim_point(g_db, centre, bin.errors, bin.bits, std::string(to_string(cfg.detector)),
                                 Scheme::FSK));
    res.bins.push_back(theory_point(g_db, centre, fsk_coherent_ber(from_db(centre)), PointSource::TheoryGaussian,
                                    Scheme::FSK));
  }
  return res;
}

}  // namespace ambc
