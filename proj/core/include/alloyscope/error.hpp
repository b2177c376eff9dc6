#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace alloyscope {

enum class ErrorCode {
  // data-core
  EmptyFile,
  MissingColumn,
  UnparseableCell,
  DuplicateColumn,
  InvalidSchema,
  InvalidCount,
  EmptyDataset,
  MissingValues,
  ColumnMismatch,
  Io,
  // filter / neighbors
  UnknownColumn,
  NegativeTolerance,
  InvalidBounds,
  EmptyBounds,
  EmptyTarget,
  DimensionMismatch,
  InvalidK,
  // surrogate
  NonFiniteInput,
  ShapeMismatch,
  NonFiniteLoss,
  InvalidConfig,
  EmptyEvaluationSet,
  UnknownAxis,
  TooFewSamples,
  DegenerateAxis,
  CorruptModelFile,
  VersionMismatch,
  // session
  UnknownDataset,
  UnknownSession,
  UnknownRow,
  ModelNotLoaded,
  BadRequest,
  PortInUse,
};

/// Stable identifier used in CLI diagnostics and HTTP error bodies.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace alloyscope
