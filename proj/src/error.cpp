// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/error.hpp"

namespace blobfield {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedDocument: return "MalformedDocument";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::OutOfBounds: return "OutOfBounds";
    case ErrorKind::BehindCamera: return "BehindCamera";
    case ErrorKind::OutOfImage: return "OutOfImage";
    case ErrorKind::IndivisibleResolution: return "IndivisibleResolution";
    case ErrorKind::ResolutionMismatch: return "ResolutionMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::ChannelsNotDivisible: return "ChannelsNotDivisible";
    case ErrorKind::PaletteTooShort: return "PaletteTooShort";
    case ErrorKind::EmptyScene: return "EmptyScene";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NonFiniteObjective: return "NonFiniteObjective";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

namespace {
std::string compose(ErrorKind kind, const std::string& message, const std::string& path) {
  std::string out(to_string(kind));
  if (!path.empty()) out += " at " + path;
  if (!message.empty()) out += ": " + message;
  return out;
}
}  // namespace

Error::Error(ErrorKind kind, std::string message, std::string path)
    : std::runtime_error(compose(kind, message, path)),
      kind_(kind),
      path_(std::move(path)),
      message_(std::move(message)) {}

bool is_validation_error(ErrorKind kind) { return kind != ErrorKind::NonFiniteObjective; }

}  // namespace blobfield
