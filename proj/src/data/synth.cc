// src/data/synth.cc

// Copyright 2026  Scriptorium Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "scriptorium/data/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "scriptorium/base/error.h"
#include "scriptorium/base/utf8.h"
#include "scriptorium/psych/psych-loss.h"

namespace scriptorium {
namespace data {

namespace {

#include "glyphs.inc"

constexpr int kMargin = 4;

uint64_t Fnv1a(std::string_view bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t SplitMix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double GlyphValue(int index, double x, double y) {
  // Bilinear sample of the glyph cell, zero outside.
  if (x < -1.0 || y < -1.0 || x > kGlyphWidth || y > kGlyphHeight) return 0.0;
  int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
  double wx = x - x0, wy = y - y0;
  auto px = [&](int yy, int xx) -> double {
    if (xx < 0 || yy < 0 || xx >= kGlyphWidth || yy >= kGlyphHeight) return 0.0;
    return kGlyphs[index][yy * kGlyphWidth + xx] / 255.0;
  };
  return (1 - wy) * ((1 - wx) * px(y0, x0) + wx * px(y0, x0 + 1)) +
         wy * ((1 - wx) * px(y0 + 1, x0) + wx * px(y0 + 1, x0 + 1));
}

}  // namespace

SynthStyle CleanStyle(int height) {
  SynthStyle s;
  s.height = height;
  s.max_rotation_deg = 0.0;
  s.max_shear = 0.0;
  s.wobble_px = 0.0;
  s.noise_sigma = 0.0;
  return s;
}

bool CanRender(char32_t c) { return c >= kFirstGlyph && c <= kLastGlyph; }

GrayImage RenderLine(std::string_view utf8, uint64_t style_seed, const SynthStyle& style) {
  const std::u32string text = Utf8Decode(utf8);
  for (std::size_t i = 0; i < text.size(); ++i)
    if (!CanRender(text[i])) throw UnknownSymbol(text[i], i);
  if (style.height < kGlyphHeight + 8)
    throw BadShape("line height " + std::to_string(style.height) + " is too small");

  std::mt19937_64 rng(SplitMix(Fnv1a(utf8) ^ SplitMix(style_seed)));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> spacing(-1, 1);

  // Horizontal layout first so the canvas width is known.
  std::vector<int> left(text.size());
  int x = kMargin;
  for (std::size_t i = 0; i < text.size(); ++i) {
    left[i] = x;
    x += kGlyphWidth + (style.max_shear > 0 || style.max_rotation_deg > 0 ? spacing(rng) : 0);
  }
  GrayImage img;
  img.height = style.height;
  img.width = std::max(8, x + kMargin);
  std::vector<double> ink(static_cast<std::size_t>(img.width) * img.height, 0.0);

  const double phase = unit(rng) * std::numbers::pi;
  const double freq = 0.15 + 0.1 * std::abs(unit(rng));
  const double top0 = (style.height - kGlyphHeight) / 2.0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const double theta = unit(rng) * style.max_rotation_deg * std::numbers::pi / 180.0;
    const double shear = unit(rng) * style.max_shear;
    const double top = top0 + style.wobble_px * std::sin(phase + freq * static_cast<double>(i));
    if (text[i] == U' ') continue;
    const int index = static_cast<int>(text[i] - kFirstGlyph);
    // Forward map about the cell centre: p' = R(theta) * Shear(shear) * p.
    // Pixels are filled by the inverse map.
    const double cx = kGlyphWidth / 2.0, cy = kGlyphHeight / 2.0;
    const double c = std::cos(theta), s = std::sin(theta);
    const double a = c, b = c * shear - s, cc = s, d = s * shear + c;  // forward matrix
    const double det = a * d - b * cc;
    const double ia = d / det, ib = -b / det, ic = -cc / det, id = a / det;
    const double ox = left[i] + cx, oy = top + cy;
    const int pad = 6;
    for (int py = static_cast<int>(oy - cy) - pad; py <= static_cast<int>(oy + cy) + pad; ++py) {
      if (py < 0 || py >= img.height) continue;
      for (int px = left[i] - pad; px <= left[i] + kGlyphWidth + pad; ++px) {
        if (px < 0 || px >= img.width) continue;
        const double dx = px + 0.5 - ox, dy = py + 0.5 - oy;
        const double gx = ia * dx + ib * dy + cx - 0.5, gy = ic * dx + id * dy + cy - 0.5;
        double v = style.ink * GlyphValue(index, gx, gy);
        double& dst = ink[static_cast<std::size_t>(py) * img.width + px];
        dst = std::max(dst, v);
      }
    }
  }
  img.pixels.resize(ink.size());
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t k = 0; k < ink.size(); ++k) {
    double v = ink[k];
    if (style.noise_sigma > 0) v += style.noise_sigma * noise(rng);
    v = std::clamp(v, 0.0, 1.0);
    img.pixels[k] = static_cast<uint8_t>(std::lround(255.0 * (1.0 - v)));
  }
  return img;
}

SynthDataset SynthesizeLines(const std::vector<std::string>& corpus, const SynthOptions& options) {
  SynthDataset out;
  if (corpus.empty() || options.count == 0) return out;
  std::set<char32_t> chars;
  const std::size_t n = options.count;
  // Split by a seeded permutation of line positions.
  std::vector<std::size_t> rank(n);
  {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::mt19937_64 rng(SplitMix(options.seed));
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t r = 0; r < n; ++r) rank[perm[r]] = r;
  }
  const auto n_train = static_cast<std::size_t>(std::llround(options.train_fraction * n));
  const auto n_val = static_cast<std::size_t>(std::llround(options.validation_fraction * n));
  std::mt19937_64 level_rng(SplitMix(options.seed ^ 0x5eedull));
  std::uniform_real_distribution<double> level(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, 40.0);
  const int digits = static_cast<int>(std::to_string(n).size());

  for (std::size_t i = 0; i < n; ++i) {
    const std::string& text = corpus[i % corpus.size()];
    for (char32_t c : Utf8Decode(text)) chars.insert(c);
    SynthLine line;
    SynthStyle style = options.style;
    if (options.degradation_spread > 0) {
      line.degradation = options.degradation_spread * level(level_rng);
      const double d = line.degradation;
      style.noise_sigma += 0.3 * d;
      style.ink *= 1.0 - 0.5 * d;
      style.max_rotation_deg *= 1.0 + d;
      style.max_shear *= 1.0 + d;
      style.wobble_px *= 1.0 + d;
    }
    const uint64_t style_seed = SplitMix(options.seed * 1000003ull + i);
    line.image = RenderLine(text, style_seed, style);
    std::string id = std::to_string(i);
    id = "line-" + std::string(digits - id.size(), '0') + id;
    LineRecord& r = line.record;
    r.id = id;
    r.split = rank[i] < n_train           ? Split::kTrain
              : rank[i] < n_train + n_val ? Split::kValidation
                                          : Split::kTest;
    r.image_path = "images/" + id + ".png";
    r.transcription = text;
    r.annotator_id = "synthetic";
    if (options.degradation_spread > 0 && !text.empty()) {
      std::vector<double> times;
      for (std::size_t k = 0; k < Utf8Decode(text).size(); ++k)
        times.push_back(std::max(50.0, std::round(350.0 + 900.0 * line.degradation +
                                                  jitter(level_rng))));
      r.line_time_ms = LineReactionTime(times);
      r.char_times_ms = std::move(times);
    }
    out.lines.push_back(std::move(line));
  }
  out.alphabet = Alphabet(std::u32string(chars.begin(), chars.end()));
  return out;
}

Manifest WriteSynthDataset(const SynthDataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "images");
  Manifest m;
  m.alphabet = dataset.alphabet;
  for (const SynthLine& line : dataset.lines) {
    WritePng(dir / line.record.image_path, line.image);
    m.records.push_back(line.record);
  }
  WriteManifest(dir / kManifestFileName, m);
  return m;
}

}  // namespace data
}  // namespace scriptorium
