#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "mmgesture/common.hpp"

// Little-endian primitive I/O shared by the file formats.
namespace mmg::binio {

template <typename U>
void put_uint(std::ostream& out, U value) {
  char buf[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(buf, sizeof(U));
}

template <typename U>
U get_uint(std::istream& in, const char* what) {
  unsigned char buf[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(U))) {
    throw ValidationError(std::string("truncated input reading ") + what);
  }
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
  return v;
}

inline void put_f32(std::ostream& out, float v) { put_uint(out, std::bit_cast<std::uint32_t>(v)); }
inline void put_f64(std::ostream& out, double v) { put_uint(out, std::bit_cast<std::uint64_t>(v)); }

inline float get_f32(std::istream& in, const char* what) {
  return std::bit_cast<float>(get_uint<std::uint32_t>(in, what));
}
inline double get_f64(std::istream& in, const char* what) {
  return std::bit_cast<double>(get_uint<std::uint64_t>(in, what));
}

inline void put_magic(std::ostream& out, const char (&magic)[5]) { out.write(magic, 4); }

inline void expect_magic(std::istream& in, const char (&magic)[5]) {
  char buf[4];
  if (!in.read(buf, 4) || std::string(buf, 4) != std::string(magic, 4)) {
    throw ValidationError(std::string("bad magic, expected ") + magic);
  }
}

}  // namespace mmg::binio
