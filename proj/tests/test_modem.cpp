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

#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "ambc/lte_grid.hpp"
#include "ambc/modem.hpp"

using namespace ambc;

namespace {

constexpr int kMsc = 288;
constexpr DetectorKind kAllKinds[] = {DetectorKind::BesselMap, DetectorKind::SquareRoot, DetectorKind::Correlation,
                                      DetectorKind::Power};

std::vector<double> as_doubles(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::vector<int> as_ints(const Eigen::VectorXd& v) {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(static_cast<int>(v[i]));
  return out;
}

/// Expected normalized energy per chip (noise included).
std::vector<double> mean_energies(const ChipSequence& chips, const ChannelSet& ch, int m_sc) {
  std::vector<double> u;
  for (int c : chips) u.push_back(2.0 * m_sc * (1.0 + std::norm(composite_gain(ch, c)) / ch.noise_power));
  return u;
}

std::vector<double> noisy_energies(const ChipSequence& chips, const ChannelSet& ch, Rng& rng) {
  const SrsConfig cfg = default_config();
  std::vector<double> u;
  u.reserve(chips.size());
  for (int c : chips) u.push_back(energy_statistic_direct(composite_gain(ch, c), cfg, ch.noise_power, rng).normalized());
  return u;
}

std::vector<bool> random_bits(std::size_t n, Rng& rng) {
  boost::random::bernoulli_distribution<> b(0.5);
  std::vector<bool> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = b(rng);
  return out;
}

ChannelSet reference_channel(double gamma_db) { return channel_from_attenuations(-52.2, -82.6, from_db(gamma_db)); }

}  // namespace

TEST_CASE("make_alphabet: reference vectors") {
  const auto bpsk = make_alphabet(Scheme::BPSK, 4);
  CHECK(as_ints(bpsk.s0) == std::vector<int>{-1, 1, -1, 1});
  CHECK(as_ints(bpsk.s1) == std::vector<int>{1, -1, 1, -1});
  const auto fsk = make_alphabet(Scheme::FSK, 4);
  CHECK(as_ints(fsk.s0) == std::vector<int>{-1, -1, 1, 1});
  CHECK(as_ints(fsk.s1) == std::vector<int>{-1, 1, -1, 1});

  for (int n : {2, 6, 10, 20, 64}) {
    const auto a = make_alphabet(Scheme::BPSK, n);
    CHECK(a.s1 == -a.s0);
    CHECK(a.s0.sum() == 0.0);
  }
  const auto f8 = make_alphabet(Scheme::FSK, 8);
  CHECK(f8.s0.dot(f8.s1) == 0.0);
  CHECK_THROWS_AS(make_alphabet(Scheme::FSK, 6), std::invalid_argument);
  CHECK_THROWS_AS(make_alphabet(Scheme::BPSK, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_alphabet(Scheme::BPSK, 0), std::invalid_argument);
}

TEST_CASE("make_fsk_alphabet: 125/250 Hz at 2 ms chips") {
  const auto a = make_fsk_alphabet(20, 125.0, 250.0, 2e-3);
  CHECK(a.n_chips == 20);
  CHECK(as_ints(a.s0.head(8)) == std::vector<int>{-1, -1, 1, 1, -1, -1, 1, 1});
  CHECK(as_ints(a.s1.head(4)) == std::vector<int>{-1, 1, -1, 1});
  CHECK(a.s0.dot(a.s1) == 0.0);
  CHECK_THROWS_AS(make_fsk_alphabet(20, 100.0, 250.0, 2e-3), std::invalid_argument);
}

TEST_CASE("scheme and detector names") {
  for (Scheme s : {Scheme::BPSK, Scheme::FSK, Scheme::DBPSK}) CHECK(parse_scheme(to_string(s)) == s);
  for (DetectorKind k : kAllKinds) CHECK(parse_detector(to_string(k)) == k);
  CHECK_THROWS_AS(parse_scheme("qam"), std::invalid_argument);
  CHECK_THROWS_AS(parse_detector("ml"), std::invalid_argument);
}

TEST_CASE("encode_bits") {
  const auto a = make_alphabet(Scheme::BPSK, 4);
  CHECK(encode_bits(a, {false}) == as_ints(a.s0));
  ChipSequence both = as_ints(a.s0);
  const auto s1 = as_ints(a.s1);
  both.insert(both.end(), s1.begin(), s1.end());
  CHECK(encode_bits(a, {false, true}) == both);
  CHECK_THROWS_AS(encode_bits(a, {}), std::invalid_argument);

  const auto d = make_alphabet(Scheme::DBPSK, 4);
  // 1 toggles, 0 repeats, reference s0: bits 1,1,0 -> s1, s0, s0
  ChipSequence expect = as_ints(d.s1);
  for (int rep = 0; rep < 2; ++rep) {
    const auto s0 = as_ints(d.s0);
    expect.insert(expect.end(), s0.begin(), s0.end());
  }
  CHECK(encode_bits(d, {true, true, false}) == expect);
}

TEST_CASE("noiseless round trip for every scheme and detector") {
  Rng rng(3);
  const ChannelSet ch = reference_channel(10.0);
  for (Scheme s : {Scheme::BPSK, Scheme::FSK, Scheme::DBPSK}) {
    const auto a = make_alphabet(s, s == Scheme::FSK ? 8 : 4);
    const auto bits = random_bits(200, rng);
    const auto u = mean_energies(encode_bits(a, bits), ch, kMsc);
    for (DetectorKind k : kAllKinds) {
      CAPTURE(to_string(s));
      CAPTURE(to_string(k));
      CHECK(demodulate_stream(k, u, a, ch, kMsc) == bits);
      if (k == DetectorKind::Correlation || k == DetectorKind::SquareRoot) {
        CHECK(demodulate_stream(k, u, a, ch, kMsc, {.normalize_symbol_energy = true}) == bits);
      } else {
        CHECK_THROWS_AS(demodulate_stream(k, u, a, ch, kMsc, {.normalize_symbol_energy = true}),
                        std::invalid_argument);
      }
    }
  }
}

TEST_CASE("detectors choose H0 on the s0 energy pattern") {
  const ChannelSet ch = reference_channel(10.0);
  REQUIRE(ch.delta_h() > 0.0);
  for (Scheme s : {Scheme::BPSK, Scheme::FSK}) {
    const auto a = make_alphabet(s, 4);
    const auto u = mean_energies(as_ints(a.s0), ch, kMsc);
    // noise-free energies: y = M |h|^2
    std::vector<double> y;
    for (int c : as_ints(a.s0)) y.push_back(kMsc * std::norm(composite_gain(ch, c)));
    for (DetectorKind k : kAllKinds) {
      CAPTURE(to_string(k));
      CHECK_FALSE(Detector(k, a, ch, kMsc).decide(u));
      if (k != DetectorKind::BesselMap && k != DetectorKind::Power) {
        CHECK_FALSE(detect(k, y, ch.noise_power, a, ch, kMsc));
      }
    }
  }
  const auto a = make_alphabet(Scheme::BPSK, 4);
  CHECK_THROWS_AS(detect(DetectorKind::Correlation, std::vector<double>{1, 2, 3}, 1.0, a, ch, kMsc),
                  std::invalid_argument);
  CHECK_THROWS_AS(detect(DetectorKind::Correlation, std::vector<double>{1, 2, 3, -1}, 1.0, a, ch, kMsc),
                  std::invalid_argument);
}

TEST_CASE("correlation on BPSK is the sign of sum s0 y") {
  Rng rng(8);
  boost::random::uniform_real_distribution<double> y(0.0, 1000.0);
  const auto a = make_alphabet(Scheme::BPSK, 4);
  ChannelSet ch = reference_channel(5.0);
  const Detector det(DetectorKind::Correlation, a, ch, kMsc);
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> u(4);
    double dot = 0.0;
    for (int i = 0; i < 4; ++i) {
      u[i] = y(rng);
      dot += a.s0[i] * u[i];
    }
    CHECK(det.decide(u) == (dot < 0.0));
  }
}

TEST_CASE("antipodal flip negates every metric; scaling leaves correlation-type decisions alone") {
  Rng rng(9);
  const ChannelSet ch = reference_channel(5.0);
  const auto a = make_alphabet(Scheme::BPSK, 4);
  SymbolAlphabet flipped = a;
  flipped.s0 = -a.s0;
  flipped.s1 = -a.s1;
  for (int t = 0; t < 300; ++t) {
    const auto u = noisy_energies(encode_bits(a, random_bits(1, rng)), ch, rng);
    for (DetectorKind k : kAllKinds) {
      const double m = Detector(k, a, ch, kMsc).metric(u);
      const double mf = Detector(k, flipped, ch, kMsc).metric(u);
      CHECK(mf == -m);
    }
    std::vector<double> scaled(u);
    for (double& v : scaled) v *= 3.7;
    for (DetectorKind k : {DetectorKind::Correlation, DetectorKind::SquareRoot}) {
      const Detector det(k, a, ch, kMsc);
      CHECK(det.decide(u) == det.decide(scaled));
    }
  }
}

TEST_CASE("power detector equals the Gaussian MAP rule in BPSK form") {
  Rng rng(10);
  for (double gamma_db : {0.0, 5.0, 10.0}) {
    for (int m : {24, 288}) {
      ChannelSet ch = reference_channel(gamma_db);
      const auto a = make_alphabet(Scheme::BPSK, 4);
      const Detector det(DetectorKind::Power, a, ch, m);
      const double on = ch.on_power();
      const double off = ch.off_power();
      const double s2 = ch.noise_power;
      const double dh_sign = ch.delta_h() > 0 ? 1.0 : -1.0;
      const double scale = std::abs(on - off) * m * s2 / (4.0 * (s2 + 2.0 * on) * (s2 + 2.0 * off));
      SrsConfig cfg = default_config();
      cfg.m_sc = m;
      for (int t = 0; t < 200; ++t) {
        std::vector<double> u;
        for (int c : encode_bits(a, random_bits(1, rng))) {
          u.push_back(energy_statistic_direct(composite_gain(ch, c), cfg, s2, rng).normalized());
        }
        double printed = 0.0;
        for (int i = 0; i < 4; ++i) printed += a.s0[i] * dh_sign * std::pow(u[i] / m - 1.0, 2);
        const double metric = det.metric(u);
        CHECK(std::abs(metric - scale * printed) <= 1e-10 * (std::abs(metric) + 1e-3));
      }
    }
  }
}

TEST_CASE("Bessel MAP metric matches the noncentral chi-square density ratio") {
  Rng rng(11);
  const int m = 24;
  ChannelSet ch = reference_channel(8.0);
  ch.noise_power *= 0.05;  // keep noncentralities moderate for the reference density
  const auto a = make_alphabet(Scheme::FSK, 4);
  const Detector det(DetectorKind::BesselMap, a, ch, m);
  const double lon = 2.0 * m * ch.on_power() / ch.noise_power;
  const double loff = 2.0 * m * ch.off_power() / ch.noise_power;
  boost::math::non_central_chi_squared on_law(2.0 * m, lon);
  boost::math::non_central_chi_squared off_law(2.0 * m, loff);
  boost::random::uniform_real_distribution<double> pick(0.5, 1.5);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> u(4);
    double ref = 0.0;
    for (int i = 0; i < 4; ++i) {
      u[i] = pick(rng) * (2.0 * m + 0.5 * (lon + loff));
      auto ll = [&](double chip) {
        return std::log(boost::math::pdf(chip > 0 ? on_law : off_law, u[i]));
      };
      ref += ll(a.s0[i]) - ll(a.s1[i]);
    }
    CHECK(det.metric(u) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("all four detectors agree at 5 dB") {
  Rng rng(12);
  const ChannelSet ch = reference_channel(5.0);
  const auto a = make_alphabet(Scheme::BPSK, 4);
  std::vector<Detector> dets;
  for (DetectorKind k : kAllKinds) dets.emplace_back(k, a, ch, kMsc);
  int agree = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const auto u = noisy_energies(encode_bits(a, random_bits(1, rng)), ch, rng);
    const bool d0 = dets[0].decide(u);
    bool all = true;
    for (const auto& d : dets) all = all && d.decide(u) == d0;
    agree += all;
  }
  CHECK(agree >= 0.99 * trials);
}

TEST_CASE("pure noise demodulates at chance") {
  Rng rng(13);
  ChannelSet ch = reference_channel(10.0);
  const auto a = make_alphabet(Scheme::BPSK, 4);
  const Detector det(DetectorKind::Correlation, a, ch, kMsc);
  ChannelSet silent = ch;
  silent.h_s = 0.0;
  const auto bits = random_bits(10000, rng);
  const auto u = noisy_energies(encode_bits(a, bits), silent, rng);
  const auto out = demodulate_stream(det, u);
  int errors = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) errors += bits[i] != out[i];
  CHECK(std::abs(errors / 1e4 - 0.5) < 0.02);
  CHECK_THROWS_AS(demodulate_stream(det, std::span<const double>(u).first(6)), std::invalid_argument);
}

TEST_CASE("frame layout") {
  CHECK(sync_pattern().size() == 21u);
  Frame f;
  f.payload_bits.assign(80, false);
  CHECK(f.bit_count() == 101);
  CHECK(f.duration_s() == doctest::Approx(4.04));

  Rng rng(14);
  const auto a = make_fsk_alphabet(20, 125.0, 250.0, 2e-3);
  const auto payload = random_bits(80, rng);
  const auto chips = encode_frame(payload, a, {.idle_chips = 250});
  CHECK(chips.size() == 101u * 20u + 250u);
  const auto sync = sync_chips(a);
  CHECK(std::equal(sync.begin(), sync.end(), chips.begin()));
  CHECK(std::all_of(chips.end() - 250, chips.end(), [](int c) { return c == -1; }));
  CHECK_THROWS_AS(encode_frame(random_bits(79, rng), a), std::invalid_argument);
}

TEST_CASE("frame_sync on clean frames") {
  Rng rng(15);
  const ChannelSet ch = reference_channel(10.0);
  for (Scheme s : {Scheme::BPSK, Scheme::FSK, Scheme::DBPSK}) {
    const auto a = s == Scheme::FSK ? make_fsk_alphabet(20, 125.0, 250.0, 2e-3) : make_alphabet(s, 4);
    for (int t = 0; t < 100; ++t) {
      ChipSequence chips(17, -1);
      const auto frame = encode_frame(random_bits(80, rng), a, {.idle_chips = 40});
      chips.insert(chips.end(), frame.begin(), frame.end());
      const auto u = mean_energies(chips, ch, kMsc);
      const SyncResult r = frame_sync(u, a);
      CAPTURE(to_string(s));
      REQUIRE(r.ok());
      CHECK(*r.offset == 17);
      CHECK(r.peak == doctest::Approx(1.0));
    }
  }
  const auto a = make_alphabet(Scheme::BPSK, 4);
  const std::vector<double> zeros(600, 0.0);
  const SyncResult r = frame_sync(zeros, a);
  CHECK_FALSE(r.ok());
  CHECK_FALSE(r.diagnostic.empty());
  CHECK_THROWS_AS(frame_sync(std::vector<double>(100, 1.0), a), std::invalid_argument);
  const Detector det(DetectorKind::Correlation, a, ch, kMsc);
  CHECK_THROWS_AS(demodulate_frame(det, zeros), SyncFailure);
}

TEST_CASE("frame_sync at 10 dB per bit") {
  Rng rng(16);
  ChannelSet ch = reference_channel(10.0);
  ch.noise_power = noise_power_for_snr_per_bit(ch, 4, kMsc, from_db(10.0));
  const auto a = make_alphabet(Scheme::BPSK, 4);
  const Detector det(DetectorKind::Correlation, a, ch, kMsc);
  boost::random::uniform_int_distribution<int> offset(0, 200);
  int hits = 0;
  int payload_ok = 0;
  for (int t = 0; t < 1000; ++t) {
    const int off = offset(rng);
    ChipSequence chips(off, -1);
    const auto payload = random_bits(80, rng);
    const auto frame = encode_frame(payload, a, {.idle_chips = 125});
    chips.insert(chips.end(), frame.begin(), frame.end());
    const auto u = noisy_energies(chips, ch, rng);
    const SyncResult r = frame_sync(u, a);
    hits += r.ok() && *r.offset == off;
    if (r.ok() && *r.offset == off) payload_ok += demodulate_frame(det, u).payload == payload;
  }
  CHECK(hits >= 990);
  CHECK(payload_ok > 0);
}
