#include "owf/imaging.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "owf/csv.hpp"

namespace owf {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(std::istream& in, const char* field) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T)))
    throw std::runtime_error(std::string("truncated OCT8 file while reading ") + field);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

SpectralImage::SpectralImage(std::uint32_t width, std::uint32_t height)
    : width_(width), height_(height), samples_(kBands * static_cast<std::size_t>(width) * height, 0.0) {}

void SpectralImage::validate() const {
  if (samples_.size() != kBands * pixels()) throw std::invalid_argument("spectral image sample count mismatch");
  for (double v : samples_)
    if (!std::isfinite(v)) throw std::invalid_argument("spectral image contains a non-finite sample");
}

OctVector pack(const SpectralImage& img) {
  img.validate();
  OctVector x(img.pixels());
  for (std::size_t p = 0; p < x.size(); ++p)
    for (std::size_t b = 0; b < kBands; ++b) x[p][b] = img.at(b, p);
  return x;
}

SpectralImage unpack(std::span<const Octonion> x, std::uint32_t width, std::uint32_t height,
                     const std::array<float, kBands>& wavelengths) {
  SpectralImage img(width, height);
  if (x.size() != img.pixels()) throw std::invalid_argument("dimension mismatch: unpack");
  img.wavelengths() = wavelengths;
  for (std::size_t p = 0; p < x.size(); ++p)
    for (std::size_t b = 0; b < kBands; ++b) img.at(b, p) = x[p][b];
  return img;
}

void write_oct8(const SpectralImage& img, std::ostream& out) {
  img.validate();
  out.write("OCT8", 4);
  put<std::uint16_t>(out, kOct8Version);
  put<std::uint32_t>(out, img.width());
  put<std::uint32_t>(out, img.height());
  for (float w : img.wavelengths()) put<float>(out, w);
  for (double v : img.samples()) put<double>(out, v);
  if (!out) throw std::runtime_error("failed writing OCT8 stream");
}

SpectralImage read_oct8(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4)) throw std::runtime_error("malformed OCT8 header: file too short");
  if (std::memcmp(magic, "OCT8", 4) != 0) throw std::runtime_error("malformed OCT8 header: bad magic");
  const auto version = get<std::uint16_t>(in, "version");
  if (version != kOct8Version) throw std::runtime_error("unsupported OCT8 version " + std::to_string(version));
  const auto width = get<std::uint32_t>(in, "width");
  const auto height = get<std::uint32_t>(in, "height");
  if (width == 0 || height == 0) throw std::runtime_error("malformed OCT8 header: empty image");
  SpectralImage img(width, height);
  for (float& w : img.wavelengths()) w = get<float>(in, "wavelengths");
  for (double& v : img.samples()) v = get<double>(in, "band samples");
  if (in.peek() != std::char_traits<char>::eof()) throw std::runtime_error("OCT8 file has trailing bytes");
  img.validate();
  return img;
}

void save(const SpectralImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_oct8(img, out);
}

SpectralImage load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_oct8(in);
}

SpectralImage normalize_unit_range(const SpectralImage& img) {
  img.validate();
  if (img.samples().empty()) return img;
  const auto [lo_it, hi_it] = std::minmax_element(img.samples().begin(), img.samples().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (lo >= 0.0 && hi <= 1.0) return img;
  SpectralImage out = img;
  const double span = hi - lo;
  for (double& v : out.samples()) v = span > 0.0 ? (v - lo) / span : 0.0;
  return out;
}

std::array<std::size_t, kBands> equispaced_bands(std::size_t bands) {
  if (bands < kBands) throw std::invalid_argument("need at least 8 bands to select from");
  std::array<std::size_t, kBands> idx{};
  for (std::size_t i = 0; i < kBands; ++i)
    idx[i] = static_cast<std::size_t>(std::lround(static_cast<double>(i) * static_cast<double>(bands - 1) / 7.0));
  return idx;
}

CropRect central_crop(std::uint32_t cube_width, std::uint32_t cube_height, std::uint32_t width, std::uint32_t height) {
  if (width > cube_width || height > cube_height) throw std::invalid_argument("crop larger than cube");
  return {(cube_width - width) / 2, (cube_height - height) / 2, width, height};
}

SpectralImage crop_and_select(const RawCube& cube, const CropRect& rect, const std::array<std::size_t, kBands>& bands) {
  const std::size_t plane = static_cast<std::size_t>(cube.width) * cube.height;
  if (cube.samples.size() != plane * cube.bands) throw std::invalid_argument("raw cube sample count mismatch");
  if (rect.width == 0 || rect.height == 0 || std::size_t{rect.x} + rect.width > cube.width ||
      std::size_t{rect.y} + rect.height > cube.height)
    throw std::out_of_range("crop rectangle outside the cube");
  for (std::size_t i = 0; i < kBands; ++i) {
    if (bands[i] >= cube.bands) throw std::out_of_range("band index out of range");
    if (i > 0 && bands[i] <= bands[i - 1]) throw std::invalid_argument("band indices must be strictly increasing");
  }

  SpectralImage img(rect.width, rect.height);
  for (std::size_t b = 0; b < kBands; ++b) {
    const double* src = cube.samples.data() + bands[b] * plane;
    for (std::uint32_t yy = 0; yy < rect.height; ++yy)
      for (std::uint32_t xx = 0; xx < rect.width; ++xx)
        img.at(b, xx, yy) = src[std::size_t{rect.y + yy} * cube.width + rect.x + xx];
    if (cube.wavelengths.size() == cube.bands) img.wavelengths()[b] = cube.wavelengths[bands[b]];
  }
  img.validate();
  return img;
}

void write_signatures_csv(std::ostream& out, std::span<const SignatureRow> rows) {
  out << "pixel_x,pixel_y";
  for (std::size_t b = 0; b < kBands; ++b) out << ",band" << b;
  out << ",source\n";
  for (const auto& row : rows) {
    if (row.image == nullptr || row.x >= row.image->width() || row.y >= row.image->height())
      throw std::out_of_range("signature pixel outside the image");
    out << row.x << ',' << row.y;
    for (std::size_t b = 0; b < kBands; ++b) out << ',' << format_double(row.image->at(b, row.x, row.y));
    out << ',' << row.source << '\n';
  }
}

}  // namespace owf
