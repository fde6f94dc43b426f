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

#include "dua/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "dua/error.hpp"
#include "dua/rng.hpp"

namespace dua::shift {
namespace {

constexpr std::size_t kSide = 28;

struct Point {
  double x, y;
};

struct Segment {
  Point a, b;
};

struct Glyph {
  std::vector<Segment> segments;
  double ring_radius = 0.0;  ///< > 0 adds a circle centred at the origin
};

// Canonical strokes in a unit box, y pointing down.
Glyph glyph_for(int label) {
  switch (label) {
    case 0:
      return {{}, 0.8};
    case 1:
      return {{{{0.0, -0.9}, {0.0, 0.9}}}};
    case 2:
      return {{{{-0.9, 0.0}, {0.9, 0.0}}}};
    case 3:
      return {{{{-0.75, 0.75}, {0.75, -0.75}}}};
    case 4:
      return {{{{-0.75, -0.75}, {0.75, 0.75}}}};
    case 5:
      return {{{{0.0, -0.85}, {0.0, 0.85}}, {{-0.85, 0.0}, {0.85, 0.0}}}};
    case 6:
      return {{{{-0.7, -0.7}, {0.7, 0.7}}, {{-0.7, 0.7}, {0.7, -0.7}}}};
    case 7:
      return {{{{-0.7, -0.7}, {0.7, -0.7}},
               {{0.7, -0.7}, {0.7, 0.7}},
               {{0.7, 0.7}, {-0.7, 0.7}},
               {{-0.7, 0.7}, {-0.7, -0.7}}}};
    case 8:
      return {{{{0.0, -0.85}, {0.85, 0.7}},
               {{0.85, 0.7}, {-0.85, 0.7}},
               {{-0.85, 0.7}, {0.0, -0.85}}}};
    default:
      return {{{{-0.8, -0.45}, {0.8, -0.45}}, {{-0.8, 0.45}, {0.8, 0.45}}}};
  }
}

double segment_distance(Point p, const Segment& s) {
  const double dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = p.x - (s.a.x + t * dx), ey = p.y - (s.a.y + t * dy);
  return std::sqrt(ex * ex + ey * ey);
}

void render(const Glyph& g, Xoshiro256pp& rng, std::span<double> out) {
  const double cx = 13.5 + rng.uniform(-2.5, 2.5);
  const double cy = 13.5 + rng.uniform(-2.5, 2.5);
  const double scale = rng.uniform(6.5, 9.0);
  const double angle = rng.uniform(-0.2, 0.2);
  const double half_width = rng.uniform(0.8, 1.6);
  const double intensity = rng.uniform(0.8, 1.0);
  const double ca = std::cos(angle), sa = std::sin(angle);

  // Transform strokes to pixel space once.
  auto to_px = [&](Point p) {
    return Point{cx + scale * (ca * p.x - sa * p.y), cy + scale * (sa * p.x + ca * p.y)};
  };
  std::vector<Segment> segs;
  segs.reserve(g.segments.size());
  for (const auto& s : g.segments) segs.push_back({to_px(s.a), to_px(s.b)});
  const double radius = g.ring_radius * scale;

  for (std::size_t y = 0; y < kSide; ++y) {
    for (std::size_t x = 0; x < kSide; ++x) {
      const Point p{static_cast<double>(x), static_cast<double>(y)};
      double d = 1e9;
      for (const auto& s : segs) d = std::min(d, segment_distance(p, s));
      if (radius > 0.0) {
        const double r = std::hypot(p.x - cx, p.y - cy);
        d = std::min(d, std::abs(r - radius));
      }
      // One-pixel linear falloff past the stroke edge.
      const double cover = std::clamp(half_width + 0.5 - d, 0.0, 1.0);
      out[y * kSide + x] = intensity * cover;
    }
  }
}

}  // namespace

Dataset gen_synthetic(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ParameterError("gen_synthetic: n must be >= 1");
  Dataset d;
  d.name = "synthetic";
  d.images = Tensor({n, 1, kSide, kSide});
  d.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % kNumClasses);
    Xoshiro256pp rng(mix_seed(seed, i));
    render(glyph_for(label), rng, d.images.sample(i));
    d.labels[i] = label;
  }
  return d;
}

}  // namespace dua::shift
