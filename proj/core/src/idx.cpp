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

#include "dua/idx.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "dua/error.hpp"

namespace dua::shift {
namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open IDX file: " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t be32(const std::vector<std::uint8_t>& b, std::size_t off,
                   const std::filesystem::path& p) {
  if (b.size() < off + 4) {
    throw FormatError(p.string() + ": truncated header at offset " + std::to_string(off));
  }
  return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) |
         (std::uint32_t{b[off + 2]} << 8) | std::uint32_t{b[off + 3]};
}

std::string hex32(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", v);
  return buf;
}

void put_be32(std::ofstream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                     static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b, 4);
}

}  // namespace

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path) {
  const auto img = read_file(images_path);
  const auto lab = read_file(labels_path);

  if (const auto m = be32(img, 0, images_path); m != kIdxImageMagic) {
    throw FormatError(images_path.string() + ": bad magic " + hex32(m) +
                      " at offset 0 (expected 0x00000803)");
  }
  if (const auto m = be32(lab, 0, labels_path); m != kIdxLabelMagic) {
    throw FormatError(labels_path.string() + ": bad magic " + hex32(m) +
                      " at offset 0 (expected 0x00000801)");
  }
  const std::size_t n = be32(img, 4, images_path);
  const std::size_t rows = be32(img, 8, images_path);
  const std::size_t cols = be32(img, 12, images_path);
  const std::size_t n_labels = be32(lab, 4, labels_path);

  const std::size_t img_payload = n * rows * cols;
  if (img.size() != 16 + img_payload) {
    throw FormatError(images_path.string() + ": header promises " +
                      std::to_string(img_payload) + " pixel bytes from offset 16, file has " +
                      std::to_string(img.size() < 16 ? 0 : img.size() - 16));
  }
  if (lab.size() != 8 + n_labels) {
    throw FormatError(labels_path.string() + ": header promises " +
                      std::to_string(n_labels) + " label bytes from offset 8, file has " +
                      std::to_string(lab.size() < 8 ? 0 : lab.size() - 8));
  }
  if (n_labels != n) {
    throw FormatError(labels_path.string() + ": " + std::to_string(n_labels) +
                      " labels at offset 4 for " + std::to_string(n) + " images in " +
                      images_path.string());
  }

  Dataset d;
  d.name = images_path.stem().string();
  d.images = Tensor({n, 1, rows, cols});
  for (std::size_t i = 0; i < img_payload; ++i) d.images[i] = img[16 + i] / 255.0;
  d.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.labels[i] = lab[8 + i];
    if (d.labels[i] >= kNumClasses) {
      throw FormatError(labels_path.string() + ": label " + std::to_string(d.labels[i]) +
                        " at offset " + std::to_string(8 + i));
    }
  }
  return d;
}

void write_idx(const Dataset& data, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path) {
  const Shape& s = data.images.shape();
  if (s.c != 1) throw DimensionError("write_idx: IDX images must have one channel");
  if (s.n != data.labels.size()) {
    throw DimensionError("write_idx: image and label counts differ");
  }
  std::ofstream img(images_path, std::ios::binary | std::ios::trunc);
  std::ofstream lab(labels_path, std::ios::binary | std::ios::trunc);
  if (!img || !lab) throw IoError("write_idx: cannot open output files");
  put_be32(img, kIdxImageMagic);
  put_be32(img, static_cast<std::uint32_t>(s.n));
  put_be32(img, static_cast<std::uint32_t>(s.h));
  put_be32(img, static_cast<std::uint32_t>(s.w));
  for (std::size_t i = 0; i < data.images.size(); ++i) {
    const double v = std::round(data.images[i] * 255.0);
    img.put(static_cast<char>(static_cast<std::uint8_t>(v < 0 ? 0 : v > 255 ? 255 : v)));
  }
  put_be32(lab, kIdxLabelMagic);
  put_be32(lab, static_cast<std::uint32_t>(s.n));
  for (int l : data.labels) lab.put(static_cast<char>(static_cast<std::uint8_t>(l)));
  if (!img || !lab) throw IoError("write_idx: write failed");
}

}  // namespace dua::shift
