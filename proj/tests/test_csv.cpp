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
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "ambc/csv.hpp"

using namespace ambc;

TEST_CASE("number formatting") {
  CHECK(csv::fmt(0.0) == "0");
  CHECK(csv::fmt(0.5) == "0.5");
  CHECK(csv::fmt(1.0 / 3.0) == "0.333333333");
  CHECK(csv::fmt(-52.2) == "-52.2");
  CHECK(csv::fmt(2.4081183e-13) == "2.4081183e-13");
  CHECK(csv::fmt(123456789012.0) == "1.23456789e+11");
  CHECK(csv::fmt(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(csv::fmt(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(csv::fmt(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("table layout") {
  csv::Table t({"a", "b"});
  t.add_row({"1", "2"});
  t.add_row({csv::fmt(0.25), "x"});
  CHECK(t.text() == "a,b\n1,2\n0.25,x\n");
  CHECK(t.rows() == 2);
  CHECK_THROWS_AS(t.add_row({"1"}), std::invalid_argument);
  CHECK_THROWS_AS(csv::Table({}), std::invalid_argument);
}

TEST_CASE("write_file is byte exact") {
  const auto p = std::filesystem::temp_directory_path() / "ambc_csv_test.csv";
  csv::write_file(p, "x\n1\n");
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "x\n1\n");
  CHECK_THROWS_AS(csv::write_file("/nonexistent-dir/zzz/a.csv", "x"), std::runtime_error);
}

TEST_CASE("grid and contour tables") {
  BerGrid g;
  g.x_axis = Eigen::VectorXd::LinSpaced(2, 0.0, 1.0);
  g.y_axis = Eigen::VectorXd::LinSpaced(2, 0.0, 1.0);
  g.ber.resize(2, 2);
  g.ber << 0.1, 0.2, std::numeric_limits<double>::quiet_NaN(), 0.4;
  CHECK(csv::ber_grid(g).text() == "x,y,ber\n0,0,0.1\n1,0,0.2\n0,1,nan\n1,1,0.4\n");

  ContourLevel lv;
  lv.level = 0.1;
  lv.lines.push_back({{Point2<double>{0.0, 0.5}, Point2<double>{0.5, 0.0}}, false});
  CHECK(csv::contours({lv}).text() == "level,line,closed,vertex,x,y\n0.1,0,0,0,0,0.5\n0.1,0,0,1,0.5,0\n");
}

TEST_CASE("ber point table") {
  BerPoint p;
  p.gamma_db = 10.0;
  p.gamma_b_db = 3.5;
  p.ber = 0.01;
  p.n_errors = 100;
  p.n_bits = 10000;
  p.receiver = "sqrt";
  p.scheme = Scheme::DBPSK;
  p.ci_low = 0.008;
  p.ci_high = 0.012;
  const auto t = csv::ber_points({p});
  CHECK(t.text() ==
        "gamma_db,gamma_b_db,scheme,receiver,source,ber,n_errors,n_bits,ci_low,ci_high\n"
        "10,3.5,dbpsk(1=toggle),sqrt,simulation,0.01,100,10000,0.008,0.012\n");
}
