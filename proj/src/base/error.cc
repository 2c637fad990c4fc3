// src/base/error.cc

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

#include "scriptorium/base/error.h"

#include "scriptorium/base/utf8.h"

namespace scriptorium {

UnknownSymbol::UnknownSymbol(char32_t symbol, std::size_t position)
    : Error("unknown symbol '" + Utf8Encode(symbol) + "' at position " +
            std::to_string(position)),
      symbol_(symbol),
      position_(position) {}

}  // namespace scriptorium
