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

#include "ambc/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ambc::csv {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

Table::Table(std::vector<std::string> header) : columns_(header.size()) {
  if (header.empty()) throw std::invalid_argument("csv::Table: empty header");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void Table::add_row(std::vector<std::string> fields) {
  if (fields.size() != columns_)
    throw std::invalid_argument("csv::Table: row has " + std::to_string(fields.size()) + " fields, header has " +
                                std::to_string(columns_));
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) text_ += ',';
    text_ += fields[i];
  }
  text_ += '\n';
  ++rows_;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Table ber_points(const std::vector<BerPoint>& points) {
  Table t({"gamma_db", "gamma_b_db", "scheme", "receiver", "source", "ber", "n_errors", "n_bits", "ci_low",
           "ci_high"});
  for (const auto& p : points)
    t.add_row({fmt(p.gamma_db), fmt(p.gamma_b_db), scheme_label(p.scheme), p.receiver,
               std::string(to_string(p.source)), fmt(p.ber), std::to_string(p.n_errors), std::to_string(p.n_bits),
               fmt(p.ci_low), fmt(p.ci_high)});
  return t;
}

Table disagreements(const ComparisonResult& res) {
  Table t({"gamma_db", "gamma_b_db", "receiver_a", "receiver_b", "disagreements", "n_bits"});
  const auto n = static_cast<long>(res.detectors.size());
  for (const auto& p : res.points)
    for (long a = 0; a < n; ++a)
      for (long b = a + 1; b < n; ++b)
        t.add_row({fmt(p.gamma_db), fmt(p.gamma_b_db), std::string(to_string(res.detectors[a])),
                   std::string(to_string(res.detectors[b])), std::to_string(p.disagreements(a, b)),
                   std::to_string(p.n_bits)});
  return t;
}

Table packets(const std::vector<PacketRecord>& packets) {
  Table t({"packet", "gamma_b_db", "true_offset", "sync_offset", "psr", "bit_errors", "bits"});
  for (const auto& p : packets)
    t.add_row({std::to_string(p.index), fmt(p.gamma_b_db), std::to_string(p.true_offset),
               std::to_string(p.sync_offset), fmt(p.psr), std::to_string(p.bit_errors), std::to_string(p.bits)});
  return t;
}

Table ber_grid(const BerGrid& grid) {
  Table t({"x", "y", "ber"});
  for (long i = 0; i < grid.ber.rows(); ++i)
    for (long j = 0; j < grid.ber.cols(); ++j)
      t.add_row({fmt(grid.x_axis[j]), fmt(grid.y_axis[i]), fmt(grid.ber(i, j))});
  return t;
}

Table contours(const std::vector<ContourLevel>& levels) {
  Table t({"level", "line", "closed", "vertex", "x", "y"});
  for (const auto& lv : levels)
    for (std::size_t l = 0; l < lv.lines.size(); ++l) {
      const auto& line = lv.lines[l];
      for (std::size_t v = 0; v < line.points.size(); ++v)
        t.add_row({fmt(lv.level), std::to_string(l), line.closed ? "1" : "0", std::to_string(v),
                   fmt(line.points[v].x()), fmt(line.points[v].y())});
    }
  return t;
}

}  // namespace ambc::csv
