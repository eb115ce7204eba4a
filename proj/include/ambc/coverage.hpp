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

#ifndef AMBC_COVERAGE_HPP
#define AMBC_COVERAGE_HPP

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ambc/ber_theory.hpp"
#include "ambc/channel.hpp"

namespace ambc {

struct GridSpec {
  double x_min = -2.0;
  double x_max = 2.0;
  double y_min = -2.0;
  double y_max = 2.0;
  int resolution = 200;  // points per axis
};

/// Exact: full three-distance scatter ratio. UeDominant: the far-BS approximation
/// iota ~ (lambda / 4 pi d_s) exp(-j 2 pi d_s / lambda), which ignores d_d - d_b and
/// therefore yields exactly circular contours around the UE.
enum class IotaModel { Exact, UeDominant };

std::string_view to_string(IotaModel m);
IotaModel parse_iota_model(std::string_view name);

struct CoverageScenario {
  Point2<double> bs_pos{50.0, 0.0};
  Point2<double> ue_pos{0.0, 0.0};
  double carrier_freq_hz = 782e6;
  double gamma = 10.0;  // linear LTE SNR
  int m_sc = 288;
  int n_chips = 4;
  GridSpec grid{};
  BerEngine engine = BerEngine::Gaussian;
  IotaModel iota_model = IotaModel::Exact;

  [[nodiscard]] double wavelength_m() const;
  /// Throws std::invalid_argument on a malformed scenario.
  void validate() const;
};

/// 4 m x 4 m near-UE window.
CoverageScenario near_field_scenario(double carrier_freq_hz = 782e6);
/// 60 m x 30 m window covering UE and BS.
CoverageScenario far_field_scenario(double carrier_freq_hz = 782e6);

/// ber(i, j) is the BER with the BD at (x_axis[j], y_axis[i]). NaN marks cells
/// holding the UE or BS and cells whose series failed.
struct BerGrid {
  Eigen::MatrixXd ber;
  Eigen::VectorXd x_axis;
  Eigen::VectorXd y_axis;
  long failed_cells = 0;
  std::string first_error;

  [[nodiscard]] static bool is_sentinel(double v) { return v != v; }
};

/// Scatter ratio for a BD at `bd` under the scenario's iota model.
std::complex<double> scenario_iota(const CoverageScenario& sc, const Point2<double>& bd);

/// BER for a BD at `bd` under the scenario (no sentinel handling).
double ber_at(const CoverageScenario& sc, const Point2<double>& bd, const SeriesControl& ctl = {},
              std::optional<BerEngine> engine = std::nullopt);

BerGrid compute_ber_grid(const CoverageScenario& sc, const SeriesControl& ctl = {}, unsigned threads = 1);

struct RangeEstimate {
  std::optional<double> radius_m;
  double worst_bearing_rad = 0.0;  // bearing (from the UE) that limits the radius
  std::string diagnostic;

  [[nodiscard]] bool ok() const { return radius_m.has_value(); }
};

/// Largest radius R such that every UE-centred circle of radius r <= R has
/// worst-bearing BER <= ber_target. Bearings are sampled every 0.5 degree; the
/// first failing radius is refined by bisection. Uses sc.engine.
/// Throws std::domain_error unless 0 < ber_target < 0.5.
RangeEstimate range_estimate(const CoverageScenario& sc, double ber_target);

struct Polyline {
  std::vector<Point2<double>> points;
  bool closed = false;
};

struct ContourLevel {
  double level = 0.0;
  std::vector<Polyline> lines;
};

inline const std::vector<double>& default_contour_levels() {
  static const std::vector<double> levels{0.4, 0.3, 0.2, 0.1, 0.05, 0.01};
  return levels;
}

/// Marching squares with linear interpolation; cells touching a sentinel are skipped.
/// Throws std::domain_error for levels outside (0, 0.5).
std::vector<ContourLevel> contour_export(const BerGrid& grid, const std::vector<double>& levels);

/// Standard deviation over mean of the vertex distances to the polygon centroid.
double circularity(const Polyline& loop);

/// Area centroid of a closed polyline.
Point2<double> polygon_centroid(const Polyline& loop);

bool polygon_contains(const Polyline& loop, const Point2<double>& p);

}  // namespace ambc

#endif  // AMBC_COVERAGE_HPP
