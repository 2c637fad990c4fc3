// scriptorium/base/file-io.h

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

#ifndef SCRIPTORIUM_BASE_FILE_IO_H_
#define SCRIPTORIUM_BASE_FILE_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace scriptorium {

// Whole-file binary read; throws IoError.
std::string ReadFile(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a half-written file. Throws IoError.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace scriptorium

#endif  // SCRIPTORIUM_BASE_FILE_IO_H_
