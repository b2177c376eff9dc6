#include "alloyscope/error.hpp"

namespace alloyscope {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::UnparseableCell: return "UnparseableCell";
    case ErrorCode::DuplicateColumn: return "DuplicateColumn";
    case ErrorCode::InvalidSchema: return "InvalidSchema";
    case ErrorCode::InvalidCount: return "InvalidCount";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::MissingValues: return "MissingValues";
    case ErrorCode::ColumnMismatch: return "ColumnMismatch";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::NegativeTolerance: return "NegativeTolerance";
    case ErrorCode::InvalidBounds: return "InvalidBounds";
    case ErrorCode::EmptyBounds: return "EmptyBounds";
    case ErrorCode::EmptyTarget: return "EmptyTarget";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyEvaluationSet: return "EmptyEvaluationSet";
    case ErrorCode::UnknownAxis: return "UnknownAxis";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::DegenerateAxis: return "DegenerateAxis";
    case ErrorCode::CorruptModelFile: return "CorruptModelFile";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::UnknownDataset: return "UnknownDataset";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::UnknownRow: return "UnknownRow";
    case ErrorCode::ModelNotLoaded: return "ModelNotLoaded";
    case ErrorCode::BadRequest: return "BadRequest";
    case ErrorCode::PortInUse: return "PortInUse";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

}  // namespace alloyscope
