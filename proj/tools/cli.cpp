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

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "ambc/ber_theory.hpp"
#include "ambc/channel.hpp"
#include "ambc/coverage.hpp"
#include "ambc/csv.hpp"
#include "ambc/montecarlo.hpp"

#ifndef AMBC_VERSION
#define AMBC_VERSION "0.0.0"
#endif

namespace ambc::cli {

namespace {

namespace fs = std::filesystem;

/// "a:step:b" (inclusive) or "v1,v2,...". Throws CLI::ValidationError.
std::vector<double> parse_grid(const std::string& spec, const std::string& name) {
  std::vector<double> out;
  try {
    if (spec.find(':') != std::string::npos) {
      std::vector<double> parts;
      std::stringstream ss(spec);
      std::string item;
      while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
      if (parts.size() != 3) throw CLI::ValidationError(name, "range must be start:step:stop");
      const double a = parts[0], step = parts[1], b = parts[2];
      if (!(step > 0.0) || !(b >= a)) throw CLI::ValidationError(name, "range needs step > 0 and stop >= start");
      const long n = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
      if (n > 1000000) throw CLI::ValidationError(name, "range has too many points");
      for (long k = 0; k < n; ++k) out.push_back(a + static_cast<double>(k) * step);
    } else {
      std::stringstream ss(spec);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    }
  } catch (const std::logic_error&) {
    throw CLI::ValidationError(name, "cannot parse '" + spec + "'");
  }
  if (out.empty()) throw CLI::ValidationError(name, "empty grid");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i])) throw CLI::ValidationError(name, "non-finite value");
    if (i > 0 && !(out[i] > out[i - 1])) throw CLI::ValidationError(name, "values must be strictly increasing");
  }
  return out;
}

std::vector<double> parse_numbers(const std::string& spec, const std::string& name, std::size_t count) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  } catch (const std::logic_error&) {
    throw CLI::ValidationError(name, "cannot parse '" + spec + "'");
  }
  if (count && out.size() != count)
    throw CLI::ValidationError(name, "expected " + std::to_string(count) + " comma-separated numbers");
  for (double v : out)
    if (!std::isfinite(v)) throw CLI::ValidationError(name, "non-finite value");
  return out;
}

Point2<double> parse_point(const std::string& spec, const std::string& name) {
  const auto v = parse_numbers(spec, name, 2);
  return {v[0], v[1]};
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

template <typename E, typename Parse>
std::vector<E> parse_list(const std::vector<std::string>& names, Parse parse, const std::string& opt) {
  std::vector<E> out;
  for (const auto& n : names) {
    try {
      out.push_back(parse(n));
    } catch (const std::invalid_argument& e) {
      throw CLI::ValidationError(opt, e.what());
    }
  }
  return out;
}

template <typename T, typename Parse>
T parse_one(const std::string& name, Parse parse, const std::string& opt) {
  try {
    return parse(name);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError(opt, e.what());
  }
}

// Everything a subcommand produces; files are written by one writer at the end.
struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;  // name, content
  nlohmann::json summary = nlohmann::json::object();
  bool nonconvergence = false;
};

struct Common {
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  unsigned threads = 1;
};

// ---- theory -----------------------------------------------------------------

struct TheoryArgs {
  int m_sc = 288;
  int n_chips = 4;
  double direct_db = -52.2;
  double scatter_db = -82.6;
  double phase_rad = 0.0;
  std::string gamma = "0:1:20";
  std::string iota;
  double prior_s0 = 0.5;
  double rel_tol = 1e-12;
  long max_terms = 200000;
};

Outputs cmd_theory(const TheoryArgs& a) {
  const auto grid = parse_grid(a.gamma, "--gamma");
  std::optional<std::complex<double>> iota;
  if (!a.iota.empty()) {
    const auto v = parse_numbers(a.iota, "--iota", 0);
    if (v.empty() || v.size() > 2) throw CLI::ValidationError("--iota", "expected re or re,im");
    iota = std::complex<double>(v[0], v.size() == 2 ? v[1] : 0.0);
  }
  if (a.m_sc < 1 || a.n_chips < 1) throw CLI::ValidationError("--msc/--n", "must be positive");
  if ((static_cast<long>(a.m_sc) * a.n_chips) % 2 != 0) throw CLI::ValidationError("--msc/--n", "M*N must be even");
  if (!(a.prior_s0 > 0.0 && a.prior_s0 < 1.0)) throw CLI::ValidationError("--prior-s0", "must be in (0, 1)");
  if (!(a.rel_tol > 0.0 && a.rel_tol < 1e-3)) throw CLI::ValidationError("--rel-tol", "must be in (0, 1e-3)");

  if (a.max_terms < 1) throw CLI::ValidationError("--max-terms", "must be positive");
  SeriesControl ctl;
  ctl.rel_tol = a.rel_tol;
  ctl.max_terms = a.max_terms;
  Outputs out;
  long failures = 0;
  csv::Table t({"gamma_db", "gamma_b_db", "ber_exact", "ber_gaussian", "ber_fsk"});
  for (double g_db : grid) {
    ChannelSet ch;
    if (iota) {
      const double amp = std::sqrt(from_db(g_db));
      ch.h_d = amp;
      ch.h_s = *iota * amp;
      ch.h_b = 1.0;
      ch.noise_power = 1.0;
    } else {
      ch = channel_from_attenuations(a.direct_db, a.scatter_db, from_db(g_db), a.phase_rad);
    }
    DetectionParams dp;
    dp.m_sc = a.m_sc;
    dp.n_chips = a.n_chips;
    dp.h_on_sq = ch.on_power();
    dp.h_off_sq = ch.off_power();
    dp.noise_power = ch.noise_power;
    dp.prior_s0 = a.prior_s0;
    auto guarded = [&](auto&& f) {
      try {
        return f();
      } catch (const SeriesError&) {
        ++failures;
        return std::nan("");
      }
    };
    const double exact = guarded([&] { return exact_ber(dp, ctl); });
    const double gauss = gaussian_ber(dp);
    double fsk = std::nan("");
    if (a.n_chips % 2 == 0 && (static_cast<long>(a.m_sc) * (a.n_chips / 2)) % 2 == 0) {
      DetectionParams f = dp;
      f.n_chips = a.n_chips / 2;
      fsk = guarded([&] { return exact_ber(f, ctl); });
    }
    t.add_row({csv::fmt(g_db), csv::fmt(to_db(snr_per_bit(ch, a.n_chips, a.m_sc))), csv::fmt(exact),
               csv::fmt(gauss), csv::fmt(fsk)});
  }
  out.files.emplace_back("theory.csv", t.text());
  out.summary["points"] = grid.size();
  out.summary["series_failures"] = failures;
  out.nonconvergence = failures > 0;
  return out;
}

// ---- simulate / compare -------------------------------------------------------

struct SweepArgs {
  int m_sc = 288;
  int n_chips = 4;
  double direct_db = -52.2;
  double scatter_db = -82.6;
  double phase_rad = 0.0;
  std::string gamma;
  std::string axis = "gamma";
  long symbols = 10000;
  std::string scheme = "bpsk";
  std::vector<std::string> detectors;
  std::string sample_model = "chi2";
  bool no_theory = false;
};

SweepConfig sweep_config(const SweepArgs& a, const Common& c) {
  SweepConfig cfg;
  cfg.direct_db = a.direct_db;
  cfg.scatter_db = a.scatter_db;
  cfg.scatter_phase_rad = a.phase_rad;
  cfg.m_sc = a.m_sc;
  cfg.n_chips = a.n_chips;
  cfg.snr_grid_db = parse_grid(a.gamma, "--gamma");
  cfg.axis = parse_one<SnrAxis>(a.axis, parse_snr_axis, "--axis");
  cfg.n_symbols_per_point = a.symbols;
  cfg.scheme = parse_one<Scheme>(a.scheme, parse_scheme, "--scheme");
  cfg.detectors = parse_list<DetectorKind>(a.detectors, parse_detector, "--detectors");
  cfg.sample_model = parse_one<SampleModel>(a.sample_model, parse_sample_model, "--sample-model");
  cfg.theory = !a.no_theory;
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("simulate", e.what());
  }
  return cfg;
}

Outputs cmd_simulate(const SweepArgs& a, const Common& c) {
  const SweepConfig cfg = sweep_config(a, c);
  Outputs out;
  try {
    out.files.emplace_back("simulate.csv", csv::ber_points(run_ber_sweep(cfg)).text());
  } catch (const SeriesError& e) {
    // theory overlay failed; rerun without it so the simulation is still written
    SweepConfig sim_only = cfg;
    sim_only.theory = false;
    out.files.emplace_back("simulate.csv", csv::ber_points(run_ber_sweep(sim_only)).text());
    out.summary["theory_error"] = e.what();
    out.nonconvergence = true;
  }
  out.summary["points"] = cfg.snr_grid_db.size();
  out.summary["symbols_per_point"] = cfg.n_symbols_per_point;
  return out;
}

Outputs cmd_compare(const SweepArgs& a, const Common& c) {
  const SweepConfig cfg = sweep_config(a, c);
  if (cfg.detectors.size() < 2) throw CLI::ValidationError("--detectors", "compare needs at least two detectors");
  const auto res = compare_receivers(cfg);
  std::vector<BerPoint> pts;
  for (const auto& p : res.points) pts.insert(pts.end(), p.per_detector.begin(), p.per_detector.end());
  Outputs out;
  out.files.emplace_back("compare.csv", csv::ber_points(pts).text());
  out.files.emplace_back("compare_disagreements.csv", csv::disagreements(res).text());
  out.summary["realizations"] = cfg.n_symbols_per_point;
  return out;
}

// ---- coverage -----------------------------------------------------------------

struct CoverageArgs {
  double freq_mhz = 782.0;
  double gamma_db = 10.0;
  std::string bs = "50,0";
  std::string ue = "0,0";
  int m_sc = 288;
  int n_chips = 4;
  std::string window;
  std::string preset = "near";
  int resolution = 200;
  std::string engine = "gaussian";
  std::string iota_model = "exact";
  std::string levels = "0.4,0.3,0.2,0.1,0.05,0.01";
  double target = 1e-2;
};

Outputs cmd_coverage(const CoverageArgs& a, const Common& c) {
  CoverageScenario sc;
  sc.carrier_freq_hz = a.freq_mhz * 1e6;
  sc.gamma = from_db(a.gamma_db);
  sc.bs_pos = parse_point(a.bs, "--bs");
  sc.ue_pos = parse_point(a.ue, "--ue");
  sc.m_sc = a.m_sc;
  sc.n_chips = a.n_chips;
  sc.engine = parse_one<BerEngine>(a.engine, parse_engine, "--engine");
  sc.iota_model = parse_one<IotaModel>(a.iota_model, parse_iota_model, "--iota-model");
  if (!a.window.empty()) {
    const auto w = parse_numbers(a.window, "--window", 4);
    sc.grid = {w[0], w[1], w[2], w[3], a.resolution};
  } else if (a.preset == "near") {
    sc.grid = {sc.ue_pos.x() - 2.0, sc.ue_pos.x() + 2.0, sc.ue_pos.y() - 2.0, sc.ue_pos.y() + 2.0, a.resolution};
  } else if (a.preset == "far") {
    const double x0 = std::min(sc.ue_pos.x(), sc.bs_pos.x()) - 5.0;
    const double x1 = std::max(sc.ue_pos.x(), sc.bs_pos.x()) + 5.0;
    sc.grid = {x0, x1, sc.ue_pos.y() - 15.0, sc.ue_pos.y() + 15.0, a.resolution};
  } else {
    throw CLI::ValidationError("--preset", "must be near or far");
  }
  const std::vector<double> lv = parse_numbers(a.levels, "--levels", 0);
  for (double l : lv)
    if (!(l > 0.0 && l < 0.5)) throw CLI::ValidationError("--levels", "levels must be in (0, 0.5)");
  if (!(a.target > 0.0 && a.target < 0.5)) throw CLI::ValidationError("--target", "must be in (0, 0.5)");
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("coverage", e.what());
  }

  const BerGrid grid = compute_ber_grid(sc, {}, c.threads);
  const auto contours = contour_export(grid, lv);
  const RangeEstimate range = range_estimate(sc, a.target);

  Outputs out;
  out.files.emplace_back("coverage_grid.csv", csv::ber_grid(grid).text());
  out.files.emplace_back("coverage_contours.csv", csv::contours(contours).text());
  csv::Table r({"ber_target", "radius_m", "radius_wavelengths", "worst_bearing_deg", "status"});
  std::string status = range.diagnostic.empty() ? "ok" : range.diagnostic;
  for (char& ch : status)
    if (ch == ',') ch = ';';
  const double rad = range.radius_m.value_or(std::nan(""));
  r.add_row({csv::fmt(a.target), csv::fmt(rad), csv::fmt(rad / sc.wavelength_m()),
             csv::fmt(range.worst_bearing_rad * 180.0 / std::numbers::pi), status});
  out.files.emplace_back("coverage_range.csv", r.text());
  out.summary["wavelength_m"] = sc.wavelength_m();
  out.summary["failed_cells"] = grid.failed_cells;
  if (grid.failed_cells > 0) {
    out.summary["first_error"] = grid.first_error;
    out.nonconvergence = true;
  }
  return out;
}

// ---- replicate ----------------------------------------------------------------

struct ReplicateArgs {
  long packets = 4000;
  double gamma_b_min = 2.0;
  double gamma_b_max = 12.0;
  double bin_width = 0.25;
  std::string detector = "correlation";
  std::string sample_model = "chi2";
  int m_sc = 288;
  double direct_db = -52.2;
  double scatter_db = -82.6;
};

Outputs cmd_replicate(const ReplicateArgs& a, const Common& c) {
  ReplicateConfig cfg;
  cfg.n_packets = a.packets;
  cfg.gamma_b_min_db = a.gamma_b_min;
  cfg.gamma_b_max_db = a.gamma_b_max;
  cfg.bin_width_db = a.bin_width;
  cfg.detector = parse_one<DetectorKind>(a.detector, parse_detector, "--detector");
  cfg.sample_model = parse_one<SampleModel>(a.sample_model, parse_sample_model, "--sample-model");
  cfg.m_sc = a.m_sc;
  cfg.direct_db = a.direct_db;
  cfg.scatter_db = a.scatter_db;
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("replicate", e.what());
  }
  const auto res = replicate_measurement(cfg);
  Outputs out;
  out.files.emplace_back("replicate_bins.csv", csv::ber_points(res.bins).text());
  out.files.emplace_back("replicate_packets.csv", csv::packets(res.packets).text());
  out.summary["packets"] = cfg.n_packets;
  out.summary["sync_failures"] = res.sync_failures;
  out.summary["wrong_sync"] = res.wrong_sync;
  return out;
}

// Full resolved configuration, restricted to the global options and the subcommand that ran.
std::string config_snapshot(const CLI::App& app, const std::string& sub_name) {
  std::stringstream in(app.config_to_str(true, false));
  std::string line;
  std::string kept;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    const auto dot = line.find('.');
    if (dot != std::string::npos && dot < eq && line.compare(0, dot, sub_name) != 0) continue;
    kept += line + "\n";
  }
  return kept;
}

void add_sweep_options(CLI::App* sub, SweepArgs& a) {
  sub->add_option("--msc", a.m_sc, "SRS subcarriers")->capture_default_str();
  sub->add_option("--n", a.n_chips, "chips per BD symbol")->capture_default_str();
  sub->add_option("--direct-db", a.direct_db, "direct path attenuation (dB)")->capture_default_str();
  sub->add_option("--scatter-db", a.scatter_db, "scattered path attenuation (dB)")->capture_default_str();
  sub->add_option("--scatter-phase", a.phase_rad, "scattered path phase (rad)")->capture_default_str();
  sub->add_option("--gamma", a.gamma, "SNR grid in dB: start:step:stop or v1,v2,...")->capture_default_str()
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  sub->add_option("--axis", a.axis, "grid axis: gamma (LTE SNR) or gamma_b (SNR per bit)")->capture_default_str();
  sub->add_option("--scheme", a.scheme, "bpsk, fsk or dbpsk")->capture_default_str();
  sub->add_option("--detectors", a.detectors, "comma list of bessel, sqrt, correlation, power")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--sample-model", a.sample_model, "chi2, gaussian or per-re")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Ambient backscatter over LTE SRS: theory, simulation and coverage"};
  app.set_version_flag("--version", AMBC_VERSION);
  app.require_subcommand(1);
  Common common;
  std::string out_dir;
  app.set_config("--config", "", "key=value config file; command-line flags take precedence");
  app.add_option("--seed", common.seed, "master random seed")->capture_default_str();
  app.add_option("--out-dir", out_dir, "output directory (default: $AMBC_OUT_DIR or .)")->envname("AMBC_OUT_DIR");
  app.add_option("--threads", common.threads, "worker threads (0 = all cores)")->capture_default_str();

  TheoryArgs th;
  auto* theory = app.add_subcommand("theory", "exact and Gaussian BER curves");
  theory->add_option("--msc", th.m_sc, "SRS subcarriers")->capture_default_str();
  theory->add_option("--n", th.n_chips, "chips per BD symbol")->capture_default_str();
  theory->add_option("--direct-db", th.direct_db, "direct path attenuation (dB)")->capture_default_str();
  theory->add_option("--scatter-db", th.scatter_db, "scattered path attenuation (dB)")->capture_default_str();
  theory->add_option("--scatter-phase", th.phase_rad, "scattered path phase (rad)")->capture_default_str();
  theory->add_option("--gamma", th.gamma, "LTE SNR grid in dB: start:step:stop or v1,v2,...")->capture_default_str()
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  theory->add_option("--iota", th.iota, "scatter ratio re[,im]; replaces the path attenuations")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  theory->add_option("--prior-s0", th.prior_s0, "probability of bit 0")->capture_default_str();
  theory->add_option("--rel-tol", th.rel_tol, "series truncation tolerance")->capture_default_str();
  theory->add_option("--max-terms", th.max_terms, "series term budget per index")->capture_default_str();

  SweepArgs sim;
  sim.gamma = "0:2:20";
  sim.detectors = {"correlation"};
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo BER sweep with theory overlay");
  add_sweep_options(simulate, sim);
  simulate->add_option("--symbols", sim.symbols, "BD symbols per SNR point")->capture_default_str();
  simulate->add_flag("--no-theory", sim.no_theory, "omit theory rows");

  SweepArgs cmp;
  cmp.gamma = "0,5,10";
  cmp.symbols = 100000;
  cmp.detectors = {"correlation", "sqrt", "power", "bessel"};
  auto* compare = app.add_subcommand("compare", "receivers on common random numbers");
  add_sweep_options(compare, cmp);
  compare->add_option("--realizations", cmp.symbols, "realizations per SNR point")->capture_default_str();

  CoverageArgs cov;
  auto* coverage = app.add_subcommand("coverage", "BER map around the UE, contours and range");
  coverage->add_option("--freq-mhz", cov.freq_mhz, "carrier frequency (MHz)")->capture_default_str();
  coverage->add_option("--gamma-db", cov.gamma_db, "LTE SNR (dB)")->capture_default_str();
  coverage->add_option("--bs", cov.bs, "BS position x,y (m)")->capture_default_str()
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  coverage->add_option("--ue", cov.ue, "UE position x,y (m)")->capture_default_str()
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  coverage->add_option("--msc", cov.m_sc, "SRS subcarriers")->capture_default_str();
  coverage->add_option("--n", cov.n_chips, "chips per BD symbol")->capture_default_str();
  coverage->add_option("--window", cov.window, "grid window xmin,xmax,ymin,ymax (m); overrides --preset")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  coverage->add_option("--preset", cov.preset, "near (4 m x 4 m around the UE) or far (UE and BS)")
      ->capture_default_str();
  coverage->add_option("--resolution", cov.resolution, "grid points per axis")->capture_default_str();
  coverage->add_option("--engine", cov.engine, "gaussian or exact")->capture_default_str();
  coverage->add_option("--iota-model", cov.iota_model, "exact or ue-dominant")->capture_default_str();
  coverage->add_option("--levels", cov.levels, "contour levels, comma separated")->capture_default_str()
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  coverage->add_option("--target", cov.target, "BER target for the range estimate")->capture_default_str();

  ReplicateArgs rep;
  auto* replicate = app.add_subcommand("replicate", "FSK frame pipeline with per-packet SNR, binned BER");
  replicate->add_option("--packets", rep.packets, "number of packets")->capture_default_str();
  replicate->add_option("--gamma-b-min", rep.gamma_b_min, "lowest per-packet SNR per bit (dB)")->capture_default_str();
  replicate->add_option("--gamma-b-max", rep.gamma_b_max, "highest per-packet SNR per bit (dB)")->capture_default_str();
  replicate->add_option("--bin-width", rep.bin_width, "SNR bin width (dB)")->capture_default_str();
  replicate->add_option("--detector", rep.detector, "detector")->capture_default_str();
  replicate->add_option("--sample-model", rep.sample_model, "chi2, gaussian or per-re")->capture_default_str();
  replicate->add_option("--msc", rep.m_sc, "SRS subcarriers")->capture_default_str();
  replicate->add_option("--direct-db", rep.direct_db, "direct path attenuation (dB)")->capture_default_str();
  replicate->add_option("--scatter-db", rep.scatter_db, "scattered path attenuation (dB)")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  const std::string started = utc_now();
  Outputs out;
  std::string sub_name;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    common.out_dir = out_dir.empty() ? "." : out_dir;
    CLI::App* sub = app.get_subcommands().front();
    sub_name = sub->get_name();
    if (sub == theory) out = cmd_theory(th);
    else if (sub == simulate) out = cmd_simulate(sim, common);
    else if (sub == compare) out = cmd_compare(cmp, common);
    else if (sub == coverage) out = cmd_coverage(cov, common);
    else out = cmd_replicate(rep, common);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }

  try {
    const fs::path dir(common.out_dir);
    fs::create_directories(dir);
    const std::string config_name = sub_name + "_config.ini";
    nlohmann::json manifest;
    manifest["tool"] = "ambc";
    manifest["version"] = AMBC_VERSION;
    manifest["subcommand"] = sub_name;
    manifest["seed"] = common.seed;
    manifest["config"] = config_snapshot(app, sub_name);
    manifest["config_file"] = config_name;
    manifest["started_utc"] = started;
    manifest["finished_utc"] = utc_now();
    manifest["status"] = out.nonconvergence ? "nonconvergence" : "ok";
    manifest["summary"] = out.summary;
    nlohmann::json files = nlohmann::json::array();
    for (const auto& [name, content] : out.files) {
      csv::write_file(dir / name, content);
      files.push_back(name);
    }
    csv::write_file(dir / config_name, manifest["config"].get<std::string>());
    files.push_back(config_name);
    manifest["outputs"] = files;
    csv::write_file(dir / (sub_name + "_manifest.json"), manifest.dump(2) + "\n");
    for (const auto& f : files) std::cout << (dir / f.get<std::string>()).string() << "\n";
    std::cout << (dir / (sub_name + "_manifest.json")).string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  if (out.nonconvergence) {
    std::cerr << "warning: some points did not converge (see manifest)\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

}  // namespace ambc::cli
