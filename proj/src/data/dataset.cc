// src/data/dataset.cc

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

#include "scriptorium/data/dataset.h"

#include "scriptorium/base/error.h"
#include "scriptorium/base/utf8.h"
#include "scriptorium/data/image.h"

namespace scriptorium {
namespace data {

std::vector<nnet::TrainingSample> LoadSamples(
    const Manifest& manifest, Split split, const std::filesystem::path& base_dir,
    const Alphabet& alphabet, int height,
    const std::map<std::string, PsychAnnotation>* annotations) {
  std::vector<nnet::TrainingSample> out;
  for (const LineRecord* r : manifest.InSplit(split)) {
    nnet::TrainingSample s;
    s.id = r->id;
    try {
      s.label = alphabet.EncodeUtf8(r->transcription);
    } catch (const UnknownSymbol& e) {
      throw AlphabetMismatch("record " + r->id + ": character '" + Utf8Encode(e.symbol()) +
                             "' is not in the model alphabet");
    }
    s.image = ToInk(ResizeToHeight(ReadPng(base_dir / r->image_path), height));
    if (annotations) {
      auto it = annotations->find(r->id);
      if (it != annotations->end()) s.psych = it->second;
    }
    out.push_back(std::move(s));
  }
  return out;
}

nnet::TrainingData LoadTrainingData(const Manifest& manifest,
                                    const std::filesystem::path& base_dir, int height,
                                    const std::map<std::string, PsychAnnotation>* annotations) {
  nnet::TrainingData data;
  data.alphabet = manifest.alphabet;
  data.train = LoadSamples(manifest, Split::kTrain, base_dir, manifest.alphabet, height,
                           annotations);
  data.validation = LoadSamples(manifest, Split::kValidation, base_dir, manifest.alphabet,
                                height, annotations);
  return data;
}

}  // namespace data
}  // namespace scriptorium
