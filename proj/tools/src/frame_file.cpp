#include "radareye/cli/frame_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace radareye::cli {

namespace {

constexpr std::uint8_t kMagic[4] = {0x52, 0x44, 0x52, 0x45};  // "RDRE"
constexpr std::size_t kHeaderSize = 4 + 4 * 4 + 1;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out_.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void frame(const Frame& f) {
    for (const auto& s : f.samples()) {
      f32(static_cast<float>(s.real()));
      f32(static_cast<float>(s.imag()));
    }
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n)
      throw FrameFileError(FrameFileError::Kind::Truncated,
                           std::string("frame file truncated while reading ") + what);
  }
  std::uint8_t u8() { return bytes_[pos_++]; }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * b);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  Frame frame(std::int64_t slot, std::uint32_t m, std::uint32_t k, const char* what) {
    need(static_cast<std::size_t>(m) * k * 8, what);
    Frame f(slot, m, k);
    for (auto& s : f.samples()) {
      const float re = f32();
      const float im = f32();
      s = cplx(re, im);
    }
    return f;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_frame_file(const FrameFile& file) {
  if (file.num_antennas == 0 || file.num_freq_points == 0)
    throw FrameFileError(FrameFileError::Kind::DimensionMismatch, "frame file: M and K must be positive");
  auto check = [&](const Frame& f) {
    if (f.num_antennas() != file.num_antennas || f.num_freq_points() != file.num_freq_points)
      throw FrameFileError(FrameFileError::Kind::DimensionMismatch, "frame file: frame shape differs from header");
  };
  if (file.background) check(*file.background);
  for (const auto& f : file.frames) check(f);
  if (file.truth && file.truth->size() != file.frames.size())
    throw FrameFileError(FrameFileError::Kind::DimensionMismatch, "frame file: truth count differs from frame count");

  Writer w;
  for (auto b : kMagic) w.u8(b);
  w.u32(FrameFile::kVersion);
  w.u32(file.num_antennas);
  w.u32(file.num_freq_points);
  w.u32(static_cast<std::uint32_t>(file.frames.size()));
  w.u8(static_cast<std::uint8_t>((file.background ? FrameFile::kHasBackground : 0) |
                                 (file.truth ? FrameFile::kHasTruth : 0)));
  if (file.background) w.frame(*file.background);
  for (const auto& f : file.frames) w.frame(f);
  if (file.truth)
    for (float level : *file.truth) w.f32(level);
  return w.take();
}

FrameFile decode_frame_file(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw FrameFileError(FrameFileError::Kind::BadMagic, "frame file: missing RDRE magic");
  Reader r(bytes);
  r.need(kHeaderSize, "header");
  for (int b = 0; b < 4; ++b) r.u8();

  const std::uint32_t version = r.u32();
  if (version != FrameFile::kVersion)
    throw FrameFileError(FrameFileError::Kind::UnsupportedVersion,
                         "frame file: unsupported version " + std::to_string(version));

  FrameFile file;
  file.num_antennas = r.u32();
  file.num_freq_points = r.u32();
  const std::uint32_t num_frames = r.u32();
  const std::uint8_t flags = r.u8();
  if (file.num_antennas == 0 || file.num_freq_points == 0)
    throw FrameFileError(FrameFileError::Kind::DimensionMismatch,
                         "frame file: zero antenna or frequency count in header");
  if (flags & ~(FrameFile::kHasBackground | FrameFile::kHasTruth))
    throw FrameFileError(FrameFileError::Kind::DimensionMismatch, "frame file: unknown flag bits set");

  const std::uint64_t frame_bytes = std::uint64_t{file.num_antennas} * file.num_freq_points * 8;
  const std::uint64_t expected = frame_bytes * (num_frames + ((flags & FrameFile::kHasBackground) ? 1 : 0)) +
                                 ((flags & FrameFile::kHasTruth) ? std::uint64_t{num_frames} * 4 : 0);
  if (r.remaining() < expected)
    throw FrameFileError(FrameFileError::Kind::Truncated,
                         "frame file: payload is " + std::to_string(r.remaining()) + " bytes, header implies " +
                             std::to_string(expected));
  if (r.remaining() > expected)
    throw FrameFileError(FrameFileError::Kind::TrailingData,
                         "frame file: " + std::to_string(r.remaining() - expected) + " bytes after payload");

  if (flags & FrameFile::kHasBackground)
    file.background = r.frame(-1, file.num_antennas, file.num_freq_points, "background");
  file.frames.reserve(num_frames);
  for (std::uint32_t t = 0; t < num_frames; ++t)
    file.frames.push_back(r.frame(t, file.num_antennas, file.num_freq_points, "frame"));
  if (flags & FrameFile::kHasTruth) {
    std::vector<float> truth(num_frames);
    for (auto& level : truth) level = r.f32();
    file.truth = std::move(truth);
  }
  return file;
}

void write_frame_file(const std::filesystem::path& path, const FrameFile& file) {
  const auto bytes = encode_frame_file(file);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FrameFileError(FrameFileError::Kind::Io, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FrameFileError(FrameFileError::Kind::Io, "failed writing '" + path.string() + "'");
}

FrameFile read_frame_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FrameFileError(FrameFileError::Kind::Io, "cannot open '" + path.string() + "'");
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return decode_frame_file(bytes);
}

}  // namespace radareye::cli
