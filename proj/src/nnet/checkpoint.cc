// src/nnet/checkpoint.cc

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

#include "scriptorium/nnet/checkpoint.h"

#include "scriptorium/base/container.h"
#include "scriptorium/base/error.h"

namespace scriptorium {
namespace nnet {

namespace {

NamedArray FromTensor(std::string name, const Tensor& t) {
  NamedArray r;
  r.name = std::move(name);
  for (int d : t.shape()) r.dims.push_back(static_cast<uint64_t>(d));
  r.data = t.storage();
  return r;
}

Tensor ToTensor(const NamedArray& r) {
  std::vector<int> shape;
  for (uint64_t d : r.dims) shape.push_back(static_cast<int>(d));
  try {
    return Tensor(std::move(shape), r.data);
  } catch (const BadShape& e) {
    throw CorruptFile("record " + r.name + ": " + e.what());
  }
}

NamedArray Flat(std::string name, std::vector<double> values) {
  NamedArray r;
  r.name = std::move(name);
  r.dims = {values.size()};
  r.data = std::move(values);
  return r;
}

}  // namespace

void SaveCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  const CrnnConfig& c = ckpt.model.config();
  std::vector<NamedArray> records;
  records.push_back(Flat("meta/config", {double(c.height), double(c.conv1_filters),
                                         double(c.conv2_filters), double(c.hidden),
                                         double(c.num_classes)}));
  std::vector<double> cps;
  for (char32_t s : ckpt.alphabet.symbols()) cps.push_back(static_cast<double>(s));
  records.push_back(Flat("meta/alphabet", std::move(cps)));
  for (const Parameter& p : ckpt.model.params())
    records.push_back(FromTensor("param/" + p.name, p.value));
  const OptimizerState& o = ckpt.optimizer;
  records.push_back(Flat("opt/meta", {double(static_cast<int>(o.kind)), double(o.step),
                                      double(o.first.size())}));
  for (std::size_t i = 0; i < o.first.size(); ++i) {
    const std::string& name = ckpt.model.params().at(i).name;
    records.push_back(FromTensor("opt/first/" + name, o.first[i]));
    records.push_back(FromTensor("opt/second/" + name, o.second.at(i)));
  }
  WriteContainer(path, records);
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::vector<NamedArray> records = ReadContainer(path);
  const NamedArray& cfg = FindRecord(records, "meta/config");
  if (cfg.data.size() != 5) throw CorruptFile("meta/config must hold 5 values");
  CrnnConfig c;
  c.height = static_cast<int>(cfg.data[0]);
  c.conv1_filters = static_cast<int>(cfg.data[1]);
  c.conv2_filters = static_cast<int>(cfg.data[2]);
  c.hidden = static_cast<int>(cfg.data[3]);
  c.num_classes = static_cast<int>(cfg.data[4]);

  Checkpoint ckpt;
  std::u32string symbols;
  for (double v : FindRecord(records, "meta/alphabet").data)
    symbols.push_back(static_cast<char32_t>(v));
  try {
    ckpt.alphabet = Alphabet(std::move(symbols));
  } catch (const Error& e) {
    throw CorruptFile(std::string("meta/alphabet: ") + e.what());
  }
  if (ckpt.alphabet.num_classes() != c.num_classes)
    throw CorruptFile("alphabet size disagrees with model output classes");

  std::vector<Parameter> params;
  try {
    Crnn probe(c, 0);
    for (const Parameter& p : probe.params())
      params.push_back({p.name, ToTensor(FindRecord(records, "param/" + p.name))});
    ckpt.model = Crnn(c, std::move(params));
  } catch (const CorruptFile&) {
    throw;
  } catch (const Error& e) {
    throw CorruptFile(std::string("checkpoint parameters: ") + e.what());
  }

  const NamedArray& om = FindRecord(records, "opt/meta");
  if (om.data.size() != 3) throw CorruptFile("opt/meta must hold 3 values");
  int kind = static_cast<int>(om.data[0]);
  if (kind < 0 || kind > 2) throw CorruptFile("unknown optimizer kind in checkpoint");
  ckpt.optimizer.kind = static_cast<OptimizerKind>(kind);
  ckpt.optimizer.step = static_cast<int64_t>(om.data[1]);
  if (om.data[2] != 0.0) {
    for (const Parameter& p : ckpt.model.params()) {
      ckpt.optimizer.first.push_back(ToTensor(FindRecord(records, "opt/first/" + p.name)));
      ckpt.optimizer.second.push_back(ToTensor(FindRecord(records, "opt/second/" + p.name)));
    }
  }
  return ckpt;
}

}  // namespace nnet
}  // namespace scriptorium
