// Copyright 2026 The vtsafl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace vtsafl {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters: t > s, dimension mismatch, unknown round, duplicate
// indices and similar caller mistakes.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Wrong number of shares handed to a threshold operation.
class ThresholdError : public Error {
 public:
  using Error::Error;
};

// Plaintext outside the configured bound.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Messages that are inconsistent with each other (label mismatch, missing
// commitments, duplicated ciphertexts).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Non-canonical or wrong-length encodings.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// Discrete log outside the table window. Signals aggregate overflow or a
// combination of partial decryptions that does not belong together.
class DlogOutOfRange : public Error {
 public:
  using Error::Error;
};

}  // namespace vtsafl
