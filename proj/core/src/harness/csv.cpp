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

#include "dua/harness/csv.hpp"

#include <cstdio>

#include "dua/error.hpp"

namespace dua::harness {

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::string& config_hash,
                     std::initializer_list<std::string> columns)
    : out_(path, std::ios::binary | std::ios::trunc), columns_(columns.size()) {
  if (!out_) throw IoError("cannot write " + path.string());
  out_ << "# config_hash=" << config_hash << '\n';
  bool first = true;
  for (const auto& c : columns) {
    if (!first) out_ << ',';
    out_ << c;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::sep() {
  if (in_row_ >= columns_) throw FormatError("csv row has too many cells");
  if (in_row_ > 0) out_ << ',';
  ++in_row_;
}

CsvWriter& CsvWriter::cell(const std::string& s) {
  sep();
  out_ << s;
  return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
  sep();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(unsigned long long v) {
  sep();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  sep();
  out_ << buf;
  return *this;
}

CsvWriter& CsvWriter::precise(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  sep();
  out_ << buf;
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) throw FormatError("csv row has too few cells");
  out_ << '\n';
  in_row_ = 0;
  if (!out_) throw IoError("csv write failed");
}

}  // namespace dua::harness
