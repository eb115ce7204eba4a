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

#ifndef AMBC_CSV_HPP
#define AMBC_CSV_HPP

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "ambc/coverage.hpp"
#include "ambc/montecarlo.hpp"

namespace ambc::csv {

/// %.9g, with "nan", "inf" and "-inf" spelled out. Locale independent.
std::string fmt(double v);

/// Single header row, comma separated, LF line endings. Fields are written as
/// given; callers pass numbers through fmt().
class Table {
 public:
  explicit Table(std::vector<std::string> header);

  /// Throws std::invalid_argument when the field count differs from the header.
  void add_row(std::vector<std::string> fields);
  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t columns() const { return columns_; }
  [[nodiscard]] const std::string& text() const { return text_; }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

/// Writes bytes verbatim (binary mode). Throws std::runtime_error with the path on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

/// gamma_db,gamma_b_db,scheme,receiver,source,ber,n_errors,n_bits,ci_low,ci_high
Table ber_points(const std::vector<BerPoint>& points);

/// gamma_db,gamma_b_db,receiver_a,receiver_b,disagreements,n_bits
Table disagreements(const ComparisonResult& res);

/// packet,gamma_b_db,true_offset,sync_offset,psr,bit_errors,bits
Table packets(const std::vector<PacketRecord>& packets);

/// x,y,ber (row-major over y then x; "nan" marks sentinel cells)
Table ber_grid(const BerGrid& grid);

/// level,line,closed,vertex,x,y
Table contours(const std::vector<ContourLevel>& levels);

}  // namespace ambc::csv

#endif  // AMBC_CSV_HPP
