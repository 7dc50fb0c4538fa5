// Copyright 2026 The msrec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MSREC_STATUS_H_
#define MSREC_STATUS_H_

#include <stdexcept>
#include <string>

namespace msrec {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied parameter is out of its documented range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Two vectors (or a vector and a model) disagree on dimension.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input file content.
class IngestError : public Error {
 public:
  using Error::Error;
};

// Numerical routine could not produce a result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Wire protocol violation or transport failure.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace msrec

#endif  // MSREC_STATUS_H_
