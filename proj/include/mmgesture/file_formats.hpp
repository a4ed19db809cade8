#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mmgesture/common.hpp"
#include "mmgesture/radar_front.hpp"

namespace mmg {

// ADC capture ("MMWC", version 1):
//   magic[4] u16 version u32 chirps u32 samples u32 channels u32 frame_count
//   then per frame: chirp-major [chirp][sample][channel] (re, im) f32 pairs.
// DRAI sequence ("DRAI", version 1):
//   magic[4] u16 version u32 range_bins u32 angle_bins u32 frames
//   u8 label (0-6, 255 unlabeled), then per frame range-major f32 pixels.
//   Frame indices and timestamps are not stored; reading numbers frames from
//   zero at the given frame period.
// All integers and floats are little-endian.

void write_cubes(std::ostream& out, std::span<const AdcCube> cubes);
void write_cubes(const std::string& path, std::span<const AdcCube> cubes);
std::vector<AdcCube> read_cubes(std::istream& in);
std::vector<AdcCube> read_cubes(const std::string& path);

void write_drai(std::ostream& out, const DraiSequence& seq);
void write_drai(const std::string& path, const DraiSequence& seq);
DraiSequence read_drai(std::istream& in, double frame_period = 0.05);
DraiSequence read_drai(const std::string& path, double frame_period = 0.05);

}  // namespace mmg
