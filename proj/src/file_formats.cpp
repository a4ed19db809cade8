#include "mmgesture/file_formats.hpp"

#include <fstream>

#include "binary_io.hpp"

namespace mmg {
namespace {

constexpr char kCubeMagic[5] = "MMWC";
constexpr char kDraiMagic[5] = "DRAI";
constexpr std::uint16_t kVersion = 1;
constexpr std::uint32_t kMaxDim = 1u << 16;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  return in;
}

void check_version(std::istream& in) {
  const auto v = binio::get_uint<std::uint16_t>(in, "version");
  if (v != kVersion) throw ValidationError("unsupported format version " + std::to_string(v));
}

std::uint32_t get_dim(std::istream& in, const char* what) {
  const auto v = binio::get_uint<std::uint32_t>(in, what);
  if (v == 0 || v > kMaxDim) throw ValidationError(std::string("implausible ") + what);
  return v;
}

}  // namespace

void write_cubes(std::ostream& out, std::span<const AdcCube> cubes) {
  if (cubes.empty()) throw ValidationError("no frames to write");
  const auto& f0 = cubes.front();
  for (const auto& c : cubes) {
    if (c.chirps != f0.chirps || c.samples != f0.samples || c.channels != f0.channels ||
        c.data.size() != static_cast<std::size_t>(c.chirps) * c.samples * c.channels) {
      throw ValidationError("frames differ in shape");
    }
  }
  binio::put_magic(out, kCubeMagic);
  binio::put_uint<std::uint16_t>(out, kVersion);
  binio::put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(f0.chirps));
  binio::put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(f0.samples));
  binio::put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(f0.channels));
  binio::put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(cubes.size()));
  for (const auto& c : cubes) {
    for (const auto& v : c.data) {
      binio::put_f32(out, v.real());
      binio::put_f32(out, v.imag());
    }
  }
  if (!out) throw std::runtime_error("write failed");
}

void write_cubes(const std::string& path, std::span<const AdcCube> cubes) {
  auto out = open_out(path);
  write_cubes(out, cubes);
}

std::vector<AdcCube> read_cubes(std::istream& in) {
  binio::expect_magic(in, kCubeMagic);
  check_version(in);
  const auto chirps = get_dim(in, "chirp count");
  const auto samples = get_dim(in, "sample count");
  const auto channels = get_dim(in, "channel count");
  const auto frames = binio::get_uint<std::uint32_t>(in, "frame count");
  std::vector<AdcCube> out;
  for (std::uint32_t f = 0; f < frames; ++f) {
    AdcCube c(static_cast<int>(chirps), static_cast<int>(samples), static_cast<int>(channels));
    c.frame_index = f;
    for (auto& v : c.data) {
      const float re = binio::get_f32(in, "cube samples");
      const float im = binio::get_f32(in, "cube samples");
      v = {re, im};
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<AdcCube> read_cubes(const std::string& path) {
  auto in = open_in(path);
  return read_cubes(in);
}

void write_drai(std::ostream& out, const DraiSequence& seq) {
  if (seq.frames.empty()) throw ValidationError("empty DRAI sequence");
  check_uniform_shape(seq);
  const auto& f0 = seq.frames.front();
  binio::put_magic(out, kDraiMagic);
  binio::put_uint<std::uint16_t>(out, kVersion);
  binio::put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(f0.range_bins));
  binio::put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(f0.angle_bins));
  binio::put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(seq.frames.size()));
  binio::put_uint<std::uint8_t>(out, seq.label ? static_cast<std::uint8_t>(*seq.label) : kUnlabeledByte);
  for (const auto& f : seq.frames) {
    for (float v : f.values) binio::put_f32(out, v);
  }
  if (!out) throw std::runtime_error("write failed");
}

void write_drai(const std::string& path, const DraiSequence& seq) {
  auto out = open_out(path);
  write_drai(out, seq);
}

DraiSequence read_drai(std::istream& in, double frame_period) {
  binio::expect_magic(in, kDraiMagic);
  check_version(in);
  const auto rows = get_dim(in, "range bin count");
  const auto cols = get_dim(in, "angle bin count");
  const auto frames = binio::get_uint<std::uint32_t>(in, "frame count");
  const auto label = binio::get_uint<std::uint8_t>(in, "label");
  DraiSequence seq;
  if (label != kUnlabeledByte) {
    if (label >= kNumGestureClasses) throw ValidationError("invalid label byte " + std::to_string(label));
    seq.label = static_cast<GestureKind>(label);
  }
  for (std::uint32_t t = 0; t < frames; ++t) {
    DraiFrame f(rows, cols);
    f.frame_index = t;
    f.timestamp = t * frame_period;
    for (auto& v : f.values) v = binio::get_f32(in, "pixels");
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

DraiSequence read_drai(const std::string& path, double frame_period) {
  auto in = open_in(path);
  return read_drai(in, frame_period);
}

}  // namespace mmg
