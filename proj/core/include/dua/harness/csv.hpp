// Copyright 2026 The DUA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DUA_HARNESS_CSV_HPP_
#define DUA_HARNESS_CSV_HPP_

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace dua::harness {

/// CSV file with a "# config_hash=..." line followed by a header row.
/// Numbers are formatted with fixed printf formats so reruns are
/// byte-identical.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& config_hash,
            std::initializer_list<std::string> columns);

  CsvWriter& cell(const std::string& s);
  CsvWriter& cell(long long v);
  CsvWriter& cell(unsigned long long v);
  CsvWriter& cell(std::size_t v) { return cell(static_cast<unsigned long long>(v)); }
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  /// %.6f
  CsvWriter& cell(double v);
  /// %.12g, for momentum weights and bin edges
  CsvWriter& precise(double v);
  void end_row();

 private:
  void sep();
  std::ofstream out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

}  // namespace dua::harness

#endif  // DUA_HARNESS_CSV_HPP_
