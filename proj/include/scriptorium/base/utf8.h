// scriptorium/base/utf8.h

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

#ifndef SCRIPTORIUM_BASE_UTF8_H_
#define SCRIPTORIUM_BASE_UTF8_H_

#include <string>
#include <string_view>

namespace scriptorium {

// Throws Error on malformed input (overlong forms, surrogates, truncation).
std::u32string Utf8Decode(std::string_view bytes);

std::string Utf8Encode(std::u32string_view text);
std::string Utf8Encode(char32_t c);

}  // namespace scriptorium

#endif  // SCRIPTORIUM_BASE_UTF8_H_
