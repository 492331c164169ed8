// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blobfield {

enum class ErrorKind {
  MalformedDocument,
  SchemaViolation,
  InvariantViolation,
  InvalidArgument,
  OutOfBounds,
  BehindCamera,
  OutOfImage,
  IndivisibleResolution,
  ResolutionMismatch,
  DimensionMismatch,
  ShapeMismatch,
  ChannelsNotDivisible,
  PaletteTooShort,
  EmptyScene,
  IndexOutOfRange,
  NonFiniteObjective,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `path()` names the offending location
/// (a JSON path such as `blobs[0].aspect[0]`, a blob index, a step) when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::string path = {});

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::string& path() const noexcept { return path_; }
  [[nodiscard]] const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string path_;
  std::string message_;
};

/// True for errors caused by bad user input (exit code 2 / HTTP 4xx) as
/// opposed to internal failures.
bool is_validation_error(ErrorKind kind);

}  // namespace blobfield
