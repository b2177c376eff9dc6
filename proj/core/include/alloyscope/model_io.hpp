#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "alloyscope/mlp.hpp"

namespace alloyscope {

// Binary envelope, all integers and floats little-endian:
//
//   char[8]   magic "ALSCMLP\0"
//   uint32    format version
//   uint32    number of layer dims L
//   uint64[L] layer dims
//   per layer l: float64 weights (row-major, dims[l+1] x dims[l]),
//                float64 biases (dims[l+1])
//   float64[L-2] PReLU slopes
//
// Names and standardization statistics live in a JSON sidecar so they stay
// human-readable. Doubles in the sidecar are written in shortest round-trip
// form, so the pair reloads bit-exactly.
inline constexpr std::uint32_t kModelFormatVersion = 1;

std::string serialize_model(const MlpModel& model);
nlohmann::json model_sidecar(const MlpModel& model);

/// Throws CorruptModelFile, VersionMismatch.
MlpModel deserialize_model(std::string_view bytes, const nlohmann::json& sidecar);

struct StoredModel {
  MlpModel model;
  nlohmann::json metadata;  // free-form, e.g. the training report
};

/// Writes `path` (binary) and `path` + ".json" (sidecar with metadata).
void save_model(const std::filesystem::path& path, const MlpModel& model,
                const nlohmann::json& metadata = nullptr);
StoredModel load_model(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& model_path);

}  // namespace alloyscope
