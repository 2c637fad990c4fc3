// scriptorium/base/error.h

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

#ifndef SCRIPTORIUM_BASE_ERROR_H_
#define SCRIPTORIUM_BASE_ERROR_H_

#include <stdexcept>
#include <string>

namespace scriptorium {

// Every failure the library reports is an Error subclass; callers that only
// care about "something went wrong" catch Error, the CLI maps subclasses to
// exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SCRIPTORIUM_DEFINE_ERROR(Name)          \
  class Name : public Error {                   \
   public:                                      \
    using Error::Error;                         \
  }

SCRIPTORIUM_DEFINE_ERROR(EmptyReference);
SCRIPTORIUM_DEFINE_ERROR(ImpossibleLabel);
SCRIPTORIUM_DEFINE_ERROR(TooLarge);
SCRIPTORIUM_DEFINE_ERROR(EmptyMeasurements);
SCRIPTORIUM_DEFINE_ERROR(NegativeEpsilon);
SCRIPTORIUM_DEFINE_ERROR(BadShape);
SCRIPTORIUM_DEFINE_ERROR(ShapeMismatch);
SCRIPTORIUM_DEFINE_ERROR(CorruptFile);
SCRIPTORIUM_DEFINE_ERROR(AlphabetMismatch);
SCRIPTORIUM_DEFINE_ERROR(EmptySplit);
SCRIPTORIUM_DEFINE_ERROR(EmptyCorpus);
SCRIPTORIUM_DEFINE_ERROR(UnknownChar);
SCRIPTORIUM_DEFINE_ERROR(SchemaError);
SCRIPTORIUM_DEFINE_ERROR(MissingImage);
SCRIPTORIUM_DEFINE_ERROR(NoTimedRecords);
SCRIPTORIUM_DEFINE_ERROR(IoError);
SCRIPTORIUM_DEFINE_ERROR(UnpairedRuns);

#undef SCRIPTORIUM_DEFINE_ERROR

// Character outside an alphabet; position is the 0-based index in the input.
class UnknownSymbol : public Error {
 public:
  UnknownSymbol(char32_t symbol, std::size_t position);
  char32_t symbol() const { return symbol_; }
  std::size_t position() const { return position_; }

 private:
  char32_t symbol_;
  std::size_t position_;
};

}  // namespace scriptorium

#endif  // SCRIPTORIUM_BASE_ERROR_H_
