#include "alloyscope/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "alloyscope/error.hpp"

namespace alloyscope {

namespace {

constexpr char kMagic[8] = {'A', 'L', 'S', 'C', 'M', 'L', 'P', '\0'};

template <typename U>
void put_le(std::string& out, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

void put_f64(std::string& out, double value) {
  put_le(out, std::bit_cast<std::uint64_t>(value));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename U>
  U get_le() {
    need(sizeof(U));
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      value |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(U);
    return value;
  }
  double get_f64() { return std::bit_cast<double>(get_le<std::uint64_t>()); }
  std::string_view take(std::size_t n) {
    need(n);
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  bool done() const { return pos_ == bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorCode::CorruptModelFile, "truncated at byte " + std::to_string(pos_));
    }
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

Eigen::VectorXd vector_from_json(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw Error(ErrorCode::CorruptModelFile, std::string("sidecar lacks ") + key);
  }
  const auto& arr = j.at(key);
  Eigen::VectorXd out(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) {
      throw Error(ErrorCode::CorruptModelFile, std::string("non-numeric entry in ") + key);
    }
    out(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  }
  return out;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

std::string serialize_model(const MlpModel& model) {
  model.validate();
  std::string out(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, kModelFormatVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.layer_dims.size()));
  for (auto d : model.layer_dims) put_le<std::uint64_t>(out, d);
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    const auto& w = model.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) put_f64(out, w(r, c));
    }
    for (Eigen::Index r = 0; r < model.biases[l].size(); ++r) put_f64(out, model.biases[l](r));
  }
  for (double a : model.prelu_alpha) put_f64(out, a);
  return out;
}

nlohmann::json model_sidecar(const MlpModel& model) {
  return {
      {"format_version", kModelFormatVersion},
      {"layer_dims", model.layer_dims},
      {"input_names", model.input_names},
      {"output_names", model.output_names},
      {"input_mean", to_std(model.input_mean)},
      {"input_std", to_std(model.input_std)},
      {"output_mean", to_std(model.output_mean)},
      {"output_std", to_std(model.output_std)},
  };
}

MlpModel deserialize_model(std::string_view bytes, const nlohmann::json& sidecar) {
  Reader in(bytes);
  if (in.take(sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic))) {
    throw Error(ErrorCode::CorruptModelFile, "bad magic");
  }
  const auto version = in.get_le<std::uint32_t>();
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::VersionMismatch, "file version " + std::to_string(version) +
                                                ", expected " +
                                                std::to_string(kModelFormatVersion));
  }
  const auto dim_count = in.get_le<std::uint32_t>();
  if (dim_count < 2 || dim_count > in.remaining() / 8) {
    throw Error(ErrorCode::CorruptModelFile, "implausible layer count");
  }
  std::vector<std::size_t> dims(dim_count);
  std::uint64_t parameters = 0;
  for (auto& d : dims) {
    const auto value = in.get_le<std::uint64_t>();
    if (value == 0 || value > (1u << 24)) {
      throw Error(ErrorCode::CorruptModelFile, "implausible layer width");
    }
    d = static_cast<std::size_t>(value);
  }
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) parameters += dims[l + 1] * (dims[l] + 1);
  parameters += dims.size() - 2;
  if (parameters * 8 != in.remaining()) {
    throw Error(ErrorCode::CorruptModelFile,
                "expected " + std::to_string(parameters * 8) + " parameter bytes, found " +
                    std::to_string(in.remaining()));
  }

  MlpModel model = make_zero_model(dims);
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    auto& w = model.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = in.get_f64();
    }
    for (Eigen::Index r = 0; r < model.biases[l].size(); ++r) model.biases[l](r) = in.get_f64();
  }
  for (auto& a : model.prelu_alpha) a = in.get_f64();

  if (!sidecar.is_object()) throw Error(ErrorCode::CorruptModelFile, "sidecar is not an object");
  if (sidecar.value("format_version", 0u) != kModelFormatVersion) {
    throw Error(ErrorCode::VersionMismatch, "sidecar format version differs");
  }
  try {
    if (sidecar.at("layer_dims").get<std::vector<std::size_t>>() != dims) {
      throw Error(ErrorCode::CorruptModelFile, "sidecar layer_dims differ from binary");
    }
    model.input_names = sidecar.at("input_names").get<std::vector<std::string>>();
    model.output_names = sidecar.at("output_names").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptModelFile, e.what());
  }
  model.input_mean = vector_from_json(sidecar, "input_mean");
  model.input_std = vector_from_json(sidecar, "input_std");
  model.output_mean = vector_from_json(sidecar, "output_mean");
  model.output_std = vector_from_json(sidecar, "output_std");
  try {
    model.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptModelFile, e.detail());
  }
  return model;
}

std::filesystem::path sidecar_path(const std::filesystem::path& model_path) {
  auto p = model_path;
  p += ".json";
  return p;
}

void save_model(const std::filesystem::path& path, const MlpModel& model,
                const nlohmann::json& metadata) {
  const auto bytes = serialize_model(model);
  auto sidecar = model_sidecar(model);
  sidecar["metadata"] = metadata;
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
  }
  std::ofstream side(sidecar_path(path), std::ios::binary);
  if (!side) throw Error(ErrorCode::Io, "cannot write " + sidecar_path(path).string());
  side << sidecar.dump(2) << '\n';
}

StoredModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::ifstream side(sidecar_path(path));
  if (!side) throw Error(ErrorCode::CorruptModelFile, "missing sidecar " + sidecar_path(path).string());
  nlohmann::json sidecar;
  try {
    sidecar = nlohmann::json::parse(side);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptModelFile, e.what());
  }
  StoredModel stored;
  stored.model = deserialize_model(bytes, sidecar);
  stored.metadata = sidecar.value("metadata", nlohmann::json());
  return stored;
}

}  // namespace alloyscope
