#include <fstream>

#include "binary_io.hpp"
#include "mmgesture/classifier.hpp"

namespace mmg {
namespace {

constexpr char kMagic[5] = "DIGM";
constexpr std::uint16_t kVersion = 1;

}  // namespace

void save_model(const Model& model, std::ostream& out) {
  const auto& c = model.config();
  binio::put_magic(out, kMagic);
  binio::put_uint<std::uint16_t>(out, kVersion);
  binio::put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(c.input_rows));
  binio::put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(c.input_cols));
  binio::put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(c.conv_filters.size()));
  for (int f : c.conv_filters) binio::put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(f));
  binio::put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(c.embedding_size));
  binio::put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(c.recurrent_hidden));
  binio::put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(c.classes));
  binio::put_f64(out, c.dropout);
  binio::put_uint<std::uint8_t>(out, static_cast<std::uint8_t>(c.normalization));
  binio::put_f64(out, c.input_scale);
  binio::put_uint<std::uint64_t>(out, model.parameter_count());
  for (const auto& t : model.tensors()) {
    for (double v : t.data) binio::put_f32(out, static_cast<float>(v));
  }
  if (!out) throw std::runtime_error("failed writing model checkpoint");
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save_model(model, out);
}

Model load_model(std::istream& in) {
  binio::expect_magic(in, kMagic);
  const auto version = binio::get_uint<std::uint16_t>(in, "version");
  if (version != kVersion) throw ValidationError("unsupported checkpoint version " + std::to_string(version));
  ModelConfig c;
  c.input_rows = static_cast<int>(binio::get_uint<std::uint32_t>(in, "input_rows"));
  c.input_cols = static_cast<int>(binio::get_uint<std::uint32_t>(in, "input_cols"));
  const auto layers = binio::get_uint<std::uint32_t>(in, "conv layer count");
  if (layers == 0 || layers > 16) throw ValidationError("implausible conv layer count");
  c.conv_filters.assign(layers, 0);
  for (auto& f : c.conv_filters) f = static_cast<int>(binio::get_uint<std::uint32_t>(in, "conv filters"));
  c.embedding_size = static_cast<int>(binio::get_uint<std::uint32_t>(in, "embedding_size"));
  c.recurrent_hidden = static_cast<int>(binio::get_uint<std::uint32_t>(in, "recurrent_hidden"));
  c.classes = static_cast<int>(binio::get_uint<std::uint32_t>(in, "classes"));
  c.dropout = binio::get_f64(in, "dropout");
  const auto norm = binio::get_uint<std::uint8_t>(in, "normalization");
  if (norm > 1) throw ValidationError("unknown normalization mode");
  c.normalization = static_cast<InputNormalization>(norm);
  c.input_scale = binio::get_f64(in, "input_scale");
  c.validate();

  const auto count = binio::get_uint<std::uint64_t>(in, "parameter_count");
  Model model = Model::zeros(c);
  if (count != model.parameter_count()) {
    throw ValidationError("checkpoint parameter count " + std::to_string(count) +
                          " does not match config (" + std::to_string(model.parameter_count()) + ")");
  }
  for (auto& t : model.tensors()) {
    for (auto& v : t.data) v = binio::get_f32(in, "parameters");
  }
  return model;
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open model " + path);
  return load_model(in);
}

}  // namespace mmg
