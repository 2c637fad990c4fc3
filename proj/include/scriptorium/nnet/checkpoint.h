// scriptorium/nnet/checkpoint.h

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

#ifndef SCRIPTORIUM_NNET_CHECKPOINT_H_
#define SCRIPTORIUM_NNET_CHECKPOINT_H_

#include <filesystem>

#include "scriptorium/nnet/crnn.h"
#include "scriptorium/nnet/optimizer.h"
#include "scriptorium/textcore/alphabet.h"

namespace scriptorium {
namespace nnet {

// Everything needed to resume training or to decode: model shape, weights,
// optimizer slots and the alphabet the output layer was trained against.
struct Checkpoint {
  Alphabet alphabet;
  Crnn model;
  OptimizerState optimizer;
};

// Records: meta/config, meta/alphabet, param/<name>, opt/meta,
// opt/first/<name>, opt/second/<name>.
void SaveCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
// Throws CorruptFile (magic, version, truncation, missing or misshapen records).
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace nnet
}  // namespace scriptorium

#endif  // SCRIPTORIUM_NNET_CHECKPOINT_H_
