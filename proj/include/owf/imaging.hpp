#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "owf/linalg.hpp"

namespace owf {

inline constexpr std::size_t kBands = 8;

/// width x height x 8 cube, planar band-major: sample (band b, pixel p) lives
/// at b * width * height + p, with p = row * width + col.
class SpectralImage {
 public:
  SpectralImage() = default;
  SpectralImage(std::uint32_t width, std::uint32_t height);

  std::uint32_t width() const { return width_; }
  std::uint32_t height() const { return height_; }
  std::size_t pixels() const { return static_cast<std::size_t>(width_) * height_; }

  double& at(std::size_t band, std::size_t pixel) { return samples_[band * pixels() + pixel]; }
  double at(std::size_t band, std::size_t pixel) const { return samples_[band * pixels() + pixel]; }
  double& at(std::size_t band, std::uint32_t x, std::uint32_t y) { return at(band, std::size_t{y} * width_ + x); }
  double at(std::size_t band, std::uint32_t x, std::uint32_t y) const { return at(band, std::size_t{y} * width_ + x); }

  std::vector<double>& samples() { return samples_; }
  const std::vector<double>& samples() const { return samples_; }

  /// Band centre wavelengths in nm; zero when unknown.
  std::array<float, kBands>& wavelengths() { return wavelengths_; }
  const std::array<float, kBands>& wavelengths() const { return wavelengths_; }

  /// Throws std::invalid_argument if the sample count is wrong or a sample is
  /// not finite.
  void validate() const;

  friend bool operator==(const SpectralImage&, const SpectralImage&) = default;

 private:
  std::uint32_t width_ = 0;
  std::uint32_t height_ = 0;
  std::array<float, kBands> wavelengths_{};
  std::vector<double> samples_;
};

/// Pixel p becomes octonion entry p with band k on unit e_k.
OctVector pack(const SpectralImage& img);
SpectralImage unpack(std::span<const Octonion> x, std::uint32_t width, std::uint32_t height,
                     const std::array<float, kBands>& wavelengths = {});

// OCT8 file layout, little-endian:
//   "OCT8" | u16 version (1) | u32 width | u32 height | 8 x f32 wavelengths |
//   8 planar bands of width*height f64.
inline constexpr std::uint16_t kOct8Version = 1;

void save(const SpectralImage& img, const std::filesystem::path& path);
SpectralImage load(const std::filesystem::path& path);
void write_oct8(const SpectralImage& img, std::ostream& out);
SpectralImage read_oct8(std::istream& in);

/// Affine map of all samples onto [0, 1] when any sample falls outside it;
/// images already in range are returned unchanged. A constant image maps to 0.
SpectralImage normalize_unit_range(const SpectralImage& img);

/// Arbitrary band-count cube in the same planar layout.
struct RawCube {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::size_t bands = 0;
  std::vector<double> samples;
  std::vector<float> wavelengths;  // optional, size == bands when present
};

struct CropRect {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
};

/// round(i * (bands - 1) / 7) for i = 0..7. Needs bands >= 8.
std::array<std::size_t, kBands> equispaced_bands(std::size_t bands);

/// Centred width x height rectangle inside a cube of the given size.
CropRect central_crop(std::uint32_t cube_width, std::uint32_t cube_height, std::uint32_t width, std::uint32_t height);

SpectralImage crop_and_select(const RawCube& cube, const CropRect& rect, const std::array<std::size_t, kBands>& bands);

struct SignatureRow {
  std::uint32_t x;
  std::uint32_t y;
  std::string source;
  const SpectralImage* image;
};

/// CSV with columns pixel_x,pixel_y,band0..band7,source.
void write_signatures_csv(std::ostream& out, std::span<const SignatureRow> rows);

}  // namespace owf
