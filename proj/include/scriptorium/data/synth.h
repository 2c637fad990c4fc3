// scriptorium/data/synth.h

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

#ifndef SCRIPTORIUM_DATA_SYNTH_H_
#define SCRIPTORIUM_DATA_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "scriptorium/data/image.h"
#include "scriptorium/data/manifest.h"

namespace scriptorium {
namespace data {

struct SynthStyle {
  int height = 64;
  double max_rotation_deg = 5.0;  // per character
  double max_shear = 0.15;        // per character, horizontal
  double wobble_px = 2.0;         // baseline amplitude
  double noise_sigma = 0.05;      // Gaussian pixel noise, ink units
  double ink = 1.0;               // stroke intensity; below 1 looks faded
};

// A style with every random perturbation switched off.
SynthStyle CleanStyle(int height = 64);

// True for characters the built-in glyph raster covers (printable ASCII).
bool CanRender(char32_t c);

// Renders one line. Identical (text, style_seed, style) give identical pixels.
// Throws UnknownSymbol for characters without a glyph.
GrayImage RenderLine(std::string_view utf8, uint64_t style_seed, const SynthStyle& style);

struct SynthOptions {
  uint64_t seed = 1;
  std::size_t count = 0;  // lines to render, cycling through the corpus
  SynthStyle style;
  double train_fraction = 0.8;
  double validation_fraction = 0.1;
  // When > 0, each line gets a degradation level d in [0, spread]: noise,
  // jitter and fading scale with d, and simulated per-character reading
  // times grow with d (cleaner lines are read faster).
  double degradation_spread = 0.0;
};

struct SynthLine {
  LineRecord record;
  GrayImage image;
  double degradation = 0.0;
};

struct SynthDataset {
  Alphabet alphabet;  // sorted distinct characters of the rendered lines
  std::vector<SynthLine> lines;
};

SynthDataset SynthesizeLines(const std::vector<std::string>& corpus, const SynthOptions& options);

// Writes images/<id>.png, manifest.jsonl and alphabet.txt under dir.
Manifest WriteSynthDataset(const SynthDataset& dataset, const std::filesystem::path& dir);

}  // namespace data
}  // namespace scriptorium

#endif  // SCRIPTORIUM_DATA_SYNTH_H_
