#pragma once

#include <stdexcept>
#include <string>

namespace hiercut {

/// Stable, scriptable failure categories. The CLI prints them as
/// `E:<code>:<detail>`, so the spelling returned by to_string() is part of
/// the tool's interface.
enum class ErrorCode {
  Parse,
  Io,
  EmptyDocument,
  DuplicateName,
  BadParent,
  NoRoot,
  MultipleRoots,
  Cycle,
  RootOnly,
  OutOfRange,
  NotLeaf,
  NotInternal,
  Antichain,
  NotTreecut,
  DimensionMismatch,
  ZeroVector,
  MissingLabel,
  InvalidArgument,
  TooLarge,
  EmptyData,
  NonFinite,
};

constexpr const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Io: return "io";
    case ErrorCode::EmptyDocument: return "empty_document";
    case ErrorCode::DuplicateName: return "duplicate_name";
    case ErrorCode::BadParent: return "bad_parent";
    case ErrorCode::NoRoot: return "no_root";
    case ErrorCode::MultipleRoots: return "multiple_roots";
    case ErrorCode::Cycle: return "cycle";
    case ErrorCode::RootOnly: return "root_only";
    case ErrorCode::OutOfRange: return "out_of_range";
    case ErrorCode::NotLeaf: return "not_leaf";
    case ErrorCode::NotInternal: return "not_internal";
    case ErrorCode::Antichain: return "antichain";
    case ErrorCode::NotTreecut: return "not_treecut";
    case ErrorCode::DimensionMismatch: return "dim_mismatch";
    case ErrorCode::ZeroVector: return "zero_vector";
    case ErrorCode::MissingLabel: return "missing_label";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::TooLarge: return "too_large";
    case ErrorCode::EmptyData: return "empty_data";
    case ErrorCode::NonFinite: return "non_finite";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hiercut
