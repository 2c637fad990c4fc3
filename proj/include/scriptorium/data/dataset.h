// scriptorium/data/dataset.h

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

#ifndef SCRIPTORIUM_DATA_DATASET_H_
#define SCRIPTORIUM_DATA_DATASET_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "scriptorium/data/manifest.h"
#include "scriptorium/data/reactions.h"
#include "scriptorium/nnet/trainer.h"

namespace scriptorium {
namespace data {

// Loads the images of one split, scaled to `height`, and encodes the
// transcriptions with `alphabet` (throws AlphabetMismatch when one does not
// fit). Annotations, when given, are attached by record id.
std::vector<nnet::TrainingSample> LoadSamples(
    const Manifest& manifest, Split split, const std::filesystem::path& base_dir,
    const Alphabet& alphabet, int height,
    const std::map<std::string, PsychAnnotation>* annotations = nullptr);

// Train and validation splits with the manifest's alphabet.
nnet::TrainingData LoadTrainingData(
    const Manifest& manifest, const std::filesystem::path& base_dir, int height,
    const std::map<std::string, PsychAnnotation>* annotations = nullptr);

}  // namespace data
}  // namespace scriptorium

#endif  // SCRIPTORIUM_DATA_DATASET_H_
