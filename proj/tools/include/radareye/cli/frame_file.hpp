#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "radareye/radar_model.hpp"

namespace radareye::cli {

/// Binary frame container, all fields little-endian:
///
///   "RDRE" | u32 version | u32 M | u32 K | u32 T | u8 flags
///   [background frame]  T frames  [T x f32 truth levels]
///
/// Frames are M*K interleaved f32 (re, im) pairs, antenna-major. Flags bit 0
/// marks a background frame, bit 1 marks ground truth.
struct FrameFile {
  static constexpr std::uint32_t kVersion = 1;
  static constexpr std::uint8_t kHasBackground = 0x01;
  static constexpr std::uint8_t kHasTruth = 0x02;

  std::uint32_t num_antennas = 0;
  std::uint32_t num_freq_points = 0;
  std::optional<Frame> background;
  std::vector<Frame> frames;
  std::optional<std::vector<float>> truth;  ///< meters, one per frame
};

class FrameFileError : public std::runtime_error {
 public:
  enum class Kind { Io, BadMagic, UnsupportedVersion, DimensionMismatch, Truncated, TrailingData };

  FrameFileError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::vector<std::uint8_t> encode_frame_file(const FrameFile& file);
FrameFile decode_frame_file(std::span<const std::uint8_t> bytes);

void write_frame_file(const std::filesystem::path& path, const FrameFile& file);
FrameFile read_frame_file(const std::filesystem::path& path);

}  // namespace radareye::cli
