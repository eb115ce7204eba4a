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

#include "ambc/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "ambc/parallel.hpp"

namespace ambc {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

bool near_cell(const Point2<double>& p, const Point2<double>& site, double dx, double dy) {
  return std::abs(p.x() - site.x()) < 0.5 * dx && std::abs(p.y() - site.y()) < 0.5 * dy;
}

}  // namespace

std::string_view to_string(IotaModel m) { return m == IotaModel::Exact ? "exact" : "ue-dominant"; }

IotaModel parse_iota_model(std::string_view name) {
  if (name == "exact") return IotaModel::Exact;
  if (name == "ue-dominant") return IotaModel::UeDominant;
  throw std::invalid_argument("unknown iota model: " + std::string(name));
}

double CoverageScenario::wavelength_m() const { return kSpeedOfLight / carrier_freq_hz; }

void CoverageScenario::validate() const {
  if (!(carrier_freq_hz > 0.0) || !std::isfinite(carrier_freq_hz))
    throw std::invalid_argument("CoverageScenario: carrier frequency must be positive");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("CoverageScenario: gamma must be positive");
  if (m_sc < 1 || n_chips < 1) throw std::invalid_argument("CoverageScenario: m_sc and n_chips must be >= 1");
  if (grid.resolution < 2) throw std::invalid_argument("CoverageScenario: grid resolution must be >= 2");
  if (!(grid.x_max > grid.x_min) || !(grid.y_max > grid.y_min))
    throw std::invalid_argument("CoverageScenario: empty grid window");
  if (!bs_pos.allFinite() || !ue_pos.allFinite() || !std::isfinite(grid.x_min) || !std::isfinite(grid.x_max) ||
      !std::isfinite(grid.y_min) || !std::isfinite(grid.y_max))
    throw std::invalid_argument("CoverageScenario: non-finite coordinates");
  if ((bs_pos - ue_pos).norm() == 0.0) throw std::invalid_argument("CoverageScenario: UE and BS coincide");
}

CoverageScenario near_field_scenario(double carrier_freq_hz) {
  CoverageScenario sc;
  sc.carrier_freq_hz = carrier_freq_hz;
  sc.grid = {-2.0, 2.0, -2.0, 2.0, 200};
  return sc;
}

CoverageScenario far_field_scenario(double carrier_freq_hz) {
  CoverageScenario sc;
  sc.carrier_freq_hz = carrier_freq_hz;
  sc.grid = {-5.0, 55.0, -15.0, 15.0, 200};
  return sc;
}

std::complex<double> scenario_iota(const CoverageScenario& sc, const Point2<double>& bd) {
  const double lambda = sc.wavelength_m();
  if (sc.iota_model == IotaModel::UeDominant) {
    const double d_s = (bd - sc.ue_pos).norm();
    if (!(d_s > 0.0)) throw std::domain_error("scenario_iota: BD coincides with the UE");
    return std::polar(lambda / (4.0 * std::numbers::pi * d_s), -std::fmod(2.0 * std::numbers::pi * d_s / lambda, 2.0 * std::numbers::pi));
  }
  const LinkGeometry<double> geom{sc.bs_pos, sc.ue_pos, bd};
  return scatter_ratio(geom, lambda).iota;
}

double ber_at(const CoverageScenario& sc, const Point2<double>& bd, const SeriesControl& ctl,
              std::optional<BerEngine> engine) {
  return ber_vs_iota(scenario_iota(sc, bd), sc.gamma, sc.m_sc, sc.n_chips, ctl, engine.value_or(sc.engine));
}

BerGrid compute_ber_grid(const CoverageScenario& sc, const SeriesControl& ctl, unsigned threads) {
  sc.validate();
  const int n = sc.grid.resolution;
  BerGrid out;
  out.x_axis = Eigen::VectorXd::LinSpaced(n, sc.grid.x_min, sc.grid.x_max);
  out.y_axis = Eigen::VectorXd::LinSpaced(n, sc.grid.y_min, sc.grid.y_max);
  out.ber.resize(n, n);
  const double dx = (sc.grid.x_max - sc.grid.x_min) / (n - 1);
  const double dy = (sc.grid.y_max - sc.grid.y_min) / (n - 1);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  // per-row error slots so assembly stays deterministic
  std::vector<long> row_failures(n, 0);
  std::vector<std::string> row_error(n);
  parallel_for(n, threads, [&](long i) {
    for (int j = 0; j < n; ++j) {
      const Point2<double> bd{out.x_axis[j], out.y_axis[i]};
      if (near_cell(bd, sc.ue_pos, dx, dy) || near_cell(bd, sc.bs_pos, dx, dy)) {
        out.ber(i, j) = nan;
        continue;
      }
      try {
        out.ber(i, j) = std::clamp(ber_at(sc, bd, ctl), 0.0, 0.5);
      } catch (const std::exception& e) {
        out.ber(i, j) = nan;
        if (row_failures[i]++ == 0) row_error[i] = e.what();
      }
    }
  });
  for (int i = 0; i < n; ++i) {
    if (row_failures[i] > 0 && out.first_error.empty()) out.first_error = row_error[i];
    out.failed_cells += row_failures[i];
  }
  return out;
}

RangeEstimate range_estimate(const CoverageScenario& sc, double ber_target) {
  if (!(ber_target > 0.0 && ber_target < 0.5)) throw std::domain_error("range_estimate: target must be in (0, 0.5)");
  sc.validate();
  const double lambda = sc.wavelength_m();
  const double d_d = (sc.bs_pos - sc.ue_pos).norm();
  constexpr int kBearings = 720;

  auto worst = [&](double r, double* bearing) {
    double max_ber = -1.0;
    for (int k = 0; k < kBearings; ++k) {
      const double th = 2.0 * std::numbers::pi * k / kBearings;
      const Point2<double> bd = sc.ue_pos + r * Point2<double>{std::cos(th), std::sin(th)};
      if ((bd - sc.bs_pos).norm() < 1e-9 * d_d) return 0.5;
      const double b = ber_at(sc, bd);
      if (b > max_ber) {
        max_ber = b;
        if (bearing) *bearing = th;
      }
    }
    return max_ber;
  };

  RangeEstimate est;
  const double r0 = 1e-3 * lambda;
  const double step = 1e-2 * lambda;
  const double r_max = std::min(0.95 * d_d, 100.0 * lambda);
  double bearing = 0.0;
  if (worst(r0, &bearing) > ber_target) {
    est.worst_bearing_rad = bearing;
    est.diagnostic = "target unreachable: BER exceeds target even adjacent to the UE";
    return est;
  }
  double good = r0;
  double bad = -1.0;
  for (double r = r0 + step; r <= r_max; r += step) {
    if (worst(r, &bearing) > ber_target) {
      bad = r;
      break;
    }
    good = r;
  }
  if (bad < 0.0) {
    est.radius_m = good;
    est.diagnostic = "no failing radius found within the search limit";
    return est;
  }
  est.worst_bearing_rad = bearing;
  for (int it = 0; it < 60 && bad - good > 1e-9 * lambda; ++it) {
    const double mid = 0.5 * (good + bad);
    double b = 0.0;
    if (worst(mid, &b) > ber_target) {
      bad = mid;
      est.worst_bearing_rad = b;
    } else {
      good = mid;
    }
  }
  est.radius_m = good;
  return est;
}

// ---- contours --------------------------------------------------------------

namespace {

// Edge keys: horizontal edge (i,j)-(i,j+1) and vertical edge (i,j)-(i+1,j).
std::int64_t h_key(long i, long j, long ncol) { return 2 * (i * ncol + j); }
std::int64_t v_key(long i, long j, long ncol) { return 2 * (i * ncol + j) + 1; }

struct Segment {
  std::int64_t a, b;
  Point2<double> pa, pb;
};

}  // namespace

std::vector<ContourLevel> contour_export(const BerGrid& grid, const std::vector<double>& levels) {
  const long nr = grid.ber.rows();
  const long nc = grid.ber.cols();
  if (grid.x_axis.size() != nc || grid.y_axis.size() != nr)
    throw std::invalid_argument("contour_export: axis sizes do not match the grid");
  std::vector<ContourLevel> out;
  for (double level : levels) {
    if (!(level > 0.0 && level < 0.5)) throw std::domain_error("contour_export: level must be in (0, 0.5)");
    ContourLevel cl;
    cl.level = level;

    auto edge_point = [&](long i0, long j0, long i1, long j1) {
      const double va = grid.ber(i0, j0);
      const double vb = grid.ber(i1, j1);
      const double t = (level - va) / (vb - va);
      const Point2<double> a{grid.x_axis[j0], grid.y_axis[i0]};
      const Point2<double> b{grid.x_axis[j1], grid.y_axis[i1]};
      return Point2<double>(a + t * (b - a));
    };

    std::vector<Segment> segs;
    for (long i = 0; i + 1 < nr; ++i) {
      for (long j = 0; j + 1 < nc; ++j) {
        const double v0 = grid.ber(i, j), v1 = grid.ber(i, j + 1), v2 = grid.ber(i + 1, j + 1),
                     v3 = grid.ber(i + 1, j);
        if (BerGrid::is_sentinel(v0) || BerGrid::is_sentinel(v1) || BerGrid::is_sentinel(v2) ||
            BerGrid::is_sentinel(v3))
          continue;
        const bool a0 = v0 > level, a1 = v1 > level, a2 = v2 > level, a3 = v3 > level;
        const int mask = a0 | (a1 << 1) | (a2 << 2) | (a3 << 3);
        if (mask == 0 || mask == 15) continue;
        // edges: 0 bottom, 1 right, 2 top, 3 left
        const std::int64_t key[4] = {h_key(i, j, nc), v_key(i, j + 1, nc), h_key(i + 1, j, nc), v_key(i, j, nc)};
        auto pt = [&](int e) {
          switch (e) {
            case 0: return edge_point(i, j, i, j + 1);
            case 1: return edge_point(i, j + 1, i + 1, j + 1);
            case 2: return edge_point(i + 1, j, i + 1, j + 1);
            default: return edge_point(i, j, i + 1, j);
          }
        };
        auto add = [&](int e, int f) { segs.push_back({key[e], key[f], pt(e), pt(f)}); };
        if (mask == 5 || mask == 10) {
          const bool centre = 0.25 * (v0 + v1 + v2 + v3) > level;
          // centre above joins the above corners, so the below corners get cut off
          const bool cut_01 = (mask == 5) == centre;  // cut corners 1 and 3
          if (cut_01) {
            add(0, 1);
            add(2, 3);
          } else {
            add(3, 0);
            add(1, 2);
          }
          continue;
        }
        int crossed[2];
        int nx = 0;
        const bool above[4] = {a0, a1, a2, a3};
        const int ends[4][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3}};
        for (int e = 0; e < 4; ++e)
          if (above[ends[e][0]] != above[ends[e][1]]) crossed[nx++] = e;
        add(crossed[0], crossed[1]);
      }
    }

    std::unordered_map<std::int64_t, std::vector<std::size_t>> by_edge;
    for (std::size_t s = 0; s < segs.size(); ++s) {
      by_edge[segs[s].a].push_back(s);
      by_edge[segs[s].b].push_back(s);
    }
    std::vector<char> used(segs.size(), 0);
    auto next_seg = [&](std::int64_t key, std::size_t from) -> long {
      for (std::size_t s : by_edge[key])
        if (s != from && !used[s]) return static_cast<long>(s);
      return -1;
    };
    for (std::size_t s0 = 0; s0 < segs.size(); ++s0) {
      if (used[s0]) continue;
      used[s0] = 1;
      std::vector<Point2<double>> fwd{segs[s0].pa, segs[s0].pb};
      const std::int64_t start_key = segs[s0].a;
      std::int64_t key = segs[s0].b;
      std::size_t cur = s0;
      bool closed = false;
      for (;;) {
        if (key == start_key) {
          closed = true;
          fwd.pop_back();
          break;
        }
        const long nx = next_seg(key, cur);
        if (nx < 0) break;
        cur = static_cast<std::size_t>(nx);
        used[cur] = 1;
        const Segment& sg = segs[cur];
        if (sg.a == key) {
          fwd.push_back(sg.pb);
          key = sg.b;
        } else {
          fwd.push_back(sg.pa);
          key = sg.a;
        }
      }
      if (!closed) {
        // walk backwards from the start edge to reach the other boundary
        std::vector<Point2<double>> back;
        key = start_key;
        cur = s0;
        for (;;) {
          const long nx = next_seg(key, cur);
          if (nx < 0) break;
          cur = static_cast<std::size_t>(nx);
          used[cur] = 1;
          const Segment& sg = segs[cur];
          if (sg.a == key) {
            back.push_back(sg.pb);
            key = sg.b;
          } else {
            back.push_back(sg.pa);
            key = sg.a;
          }
        }
        std::reverse(back.begin(), back.end());
        back.insert(back.end(), fwd.begin(), fwd.end());
        fwd.swap(back);
      }
      cl.lines.push_back({std::move(fwd), closed});
    }
    out.push_back(std::move(cl));
  }
  return out;
}

Point2<double> polygon_centroid(const Polyline& loop) {
  const auto& p = loop.points;
  if (p.empty()) throw std::invalid_argument("polygon_centroid: empty polyline");
  double a2 = 0.0;
  Point2<double> c = Point2<double>::Zero();
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& u = p[k];
    const auto& v = p[(k + 1) % p.size()];
    const double cr = u.x() * v.y() - v.x() * u.y();
    a2 += cr;
    c += cr * (u + v);
  }
  if (std::abs(a2) < 1e-300) {
    Point2<double> m = Point2<double>::Zero();
    for (const auto& q : p) m += q;
    return m / static_cast<double>(p.size());
  }
  return c / (3.0 * a2);
}

double circularity(const Polyline& loop) {
  if (loop.points.size() < 3) throw std::invalid_argument("circularity: need at least 3 vertices");
  const Point2<double> c = polygon_centroid(loop);
  std::vector<double> d;
  d.reserve(loop.points.size());
  for (const auto& q : loop.points) d.push_back((q - c).norm());
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(d.size());
  double var = 0.0;
  for (double v : d) var += (v - mean) * (v - mean);
  var /= static_cast<double>(d.size());
  return std::sqrt(var) / mean;
}

bool polygon_contains(const Polyline& loop, const Point2<double>& p) {
  bool inside = false;
  const auto& v = loop.points;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y() > p.y()) != (v[j].y() > p.y()) &&
        p.x() < (v[j].x() - v[i].x()) * (p.y() - v[i].y()) / (v[j].y() - v[i].y()) + v[i].x())
      inside = !inside;
  }
  return inside;
}

}  // namespace ambc
