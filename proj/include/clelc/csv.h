// Copyright 2026 The CLELC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLELC_CSV_H_
#define CLELC_CSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace clelc {

// Shortest decimal that parses back to exactly the same double.
std::string FormatDouble(double v);

// Appends fields joined by commas plus a trailing newline.
void AppendCsvLine(std::string& out, const std::vector<double>& fields);
void AppendCsvHeader(std::string& out, const std::vector<std::string>& names);

// Minimal reader for the numeric CSV files this library writes.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Column index by name, -1 when absent.
  int Column(std::string_view name) const;
};

CsvTable ParseCsv(std::string_view text);

}  // namespace clelc

#endif  // CLELC_CSV_H_
