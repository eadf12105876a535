#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "owf/harness.hpp"
#include "owf/imaging.hpp"

using namespace owf;

namespace {

SpectralImage random_image(std::uint32_t w, std::uint32_t h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SpectralImage img(w, h);
  for (double& v : img.samples()) v = u(rng);
  for (std::size_t b = 0; b < kBands; ++b) img.wavelengths()[b] = 400.0f + 40.0f * static_cast<float>(b);
  return img;
}

std::string serialize(const SpectralImage& img) {
  std::ostringstream out(std::ios::binary);
  write_oct8(img, out);
  return out.str();
}

}  // namespace

TEST_CASE("pack places band k on unit e_k") {
  SpectralImage img(1, 1);
  img.at(0, 0) = 1.0;
  const OctVector x = pack(img);
  REQUIRE(x.size() == 1);
  CHECK(x[0] == Octonion(1.0));

  SpectralImage two(2, 1);
  for (std::size_t b = 0; b < kBands; ++b) two.at(b, 1u, 0u) = static_cast<double>(b);
  CHECK(pack(two)[1][5] == 5.0);
}

TEST_CASE("pack and unpack are inverse") {
  const SpectralImage img = random_image(5, 3, 1);
  const SpectralImage back = unpack(pack(img), 5, 3, img.wavelengths());
  CHECK(back == img);
  CHECK(std::isinf(harness::psnr(img, back)));
  CHECK(pack(random_image(32, 32, 2)).size() == 1024);
  CHECK_THROWS_AS(unpack(OctVector(3), 2, 2), std::invalid_argument);
}

TEST_CASE("OCT8 layout") {
  SpectralImage img(2, 1);
  img.wavelengths()[0] = 400.0f;
  img.at(0, 0) = 1.0;
  const std::string bytes = serialize(img);
  CHECK(bytes.size() == 4 + 2 + 4 + 4 + 8 * 4 + 16 * 8);
  CHECK(bytes.substr(0, 4) == "OCT8");
  CHECK(static_cast<unsigned char>(bytes[4]) == 1);  // version, little-endian
  CHECK(static_cast<unsigned char>(bytes[5]) == 0);
  CHECK(static_cast<unsigned char>(bytes[6]) == 2);  // width
  CHECK(static_cast<unsigned char>(bytes[10]) == 1);  // height
  // 1.0 as a little-endian f64: 00 .. 00 f0 3f
  CHECK(static_cast<unsigned char>(bytes[46 + 6]) == 0xf0);
  CHECK(static_cast<unsigned char>(bytes[46 + 7]) == 0x3f);
}

TEST_CASE("OCT8 round trip is bit exact") {
  const SpectralImage img = random_image(7, 4, 3);
  std::istringstream in(serialize(img), std::ios::binary);
  const SpectralImage back = read_oct8(in);
  CHECK(back == img);

  const auto path = std::filesystem::temp_directory_path() / "owf_imaging_roundtrip.oct8";
  save(img, path);
  CHECK(load(path) == img);
  std::filesystem::remove(path);
}

TEST_CASE("OCT8 rejects malformed input") {
  const std::string good = serialize(random_image(3, 3, 4));
  auto read = [](std::string bytes) {
    std::istringstream in(bytes, std::ios::binary);
    return read_oct8(in);
  };
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  CHECK_THROWS_WITH_AS(read(bad_magic), doctest::Contains("bad magic"), std::runtime_error);
  CHECK_THROWS_WITH_AS(read(good.substr(0, good.size() - 3)), doctest::Contains("truncated"), std::runtime_error);
  CHECK_THROWS_AS(read(good.substr(0, 2)), std::runtime_error);
  std::string bad_version = good;
  bad_version[4] = 9;
  CHECK_THROWS_WITH_AS(read(bad_version), doctest::Contains("version"), std::runtime_error);
  CHECK_THROWS_AS(read(good + "x"), std::runtime_error);
  CHECK_THROWS_AS(load("/nonexistent/owf.oct8"), std::runtime_error);
}

TEST_CASE("synthetic fixture loads with n = 256") {
  const auto path = std::filesystem::temp_directory_path() / "owf_fixture16.oct8";
  save(harness::synthetic_image(16, 16, 0), path);
  const SpectralImage img = load(path);
  CHECK(img.width() == 16);
  CHECK(pack(img).size() == 256);
  for (double v : img.samples()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  std::filesystem::remove(path);
}

TEST_CASE("normalize_unit_range") {
  const SpectralImage in_range = random_image(2, 2, 5);
  CHECK(normalize_unit_range(in_range) == in_range);
  SpectralImage wide = in_range;
  for (double& v : wide.samples()) v = v * 100.0 - 3.0;
  const SpectralImage n = normalize_unit_range(wide);
  const auto [lo, hi] = std::minmax_element(n.samples().begin(), n.samples().end());
  CHECK(*lo == 0.0);
  CHECK(*hi == doctest::Approx(1.0));
}

TEST_CASE("equispaced band selection") {
  CHECK(equispaced_bands(31) == std::array<std::size_t, 8>{0, 4, 9, 13, 17, 21, 26, 30});
  CHECK(equispaced_bands(8) == std::array<std::size_t, 8>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK_THROWS_AS(equispaced_bands(7), std::invalid_argument);
}

TEST_CASE("crop_and_select") {
  RawCube cube;
  cube.width = 6;
  cube.height = 5;
  cube.bands = 31;
  cube.samples.resize(6 * 5 * 31);
  for (std::size_t i = 0; i < cube.samples.size(); ++i) cube.samples[i] = static_cast<double>(i);
  for (std::size_t b = 0; b < 31; ++b) cube.wavelengths.push_back(400.0f + 10.0f * static_cast<float>(b));

  SUBCASE("identity crop of an 8-band cube") {
    RawCube eight = cube;
    eight.bands = 8;
    eight.samples.resize(6 * 5 * 8);
    eight.wavelengths.resize(8);
    const SpectralImage img = crop_and_select(eight, {0, 0, 6, 5}, equispaced_bands(8));
    CHECK(img.samples() == eight.samples);
  }
  SUBCASE("central crop with equispaced bands") {
    const CropRect r = central_crop(6, 5, 2, 3);
    CHECK(r.x == 2);
    CHECK(r.y == 1);
    const SpectralImage img = crop_and_select(cube, r, equispaced_bands(31));
    CHECK(img.at(2, 0u, 0u) == cube.samples[9 * 30 + 1 * 6 + 2]);
    CHECK(img.at(7, 1u, 2u) == cube.samples[30 * 30 + 3 * 6 + 3]);
    CHECK(img.wavelengths()[7] == 700.0f);
  }
  SUBCASE("1x1 crop") {
    const SpectralImage img = crop_and_select(cube, {5, 4, 1, 1}, equispaced_bands(31));
    CHECK(img.pixels() == 1);
    CHECK(img.at(0, 0) == cube.samples[4 * 6 + 5]);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(crop_and_select(cube, {5, 4, 2, 1}, equispaced_bands(31)), std::out_of_range);
    CHECK_THROWS_AS(crop_and_select(cube, {0, 0, 1, 1}, {0, 1, 2, 3, 4, 5, 6, 31}), std::out_of_range);
    CHECK_THROWS_AS(crop_and_select(cube, {0, 0, 1, 1}, {0, 1, 2, 3, 4, 5, 5, 6}), std::invalid_argument);
    CHECK_THROWS_AS(central_crop(4, 4, 5, 1), std::invalid_argument);
  }
}

TEST_CASE("signature CSV") {
  SpectralImage img(2, 2);
  for (std::size_t b = 0; b < kBands; ++b) img.at(b, 1u, 0u) = 0.5 * static_cast<double>(b);
  const std::vector<SignatureRow> rows{{1, 0, "ref", &img}};
  std::ostringstream out;
  write_signatures_csv(out, rows);
  CHECK(out.str() ==
        "pixel_x,pixel_y,band0,band1,band2,band3,band4,band5,band6,band7,source\n"
        "1,0,0,0.5,1,1.5,2,2.5,3,3.5,ref\n");
  const std::vector<SignatureRow> bad{{2, 0, "ref", &img}};
  CHECK_THROWS_AS(write_signatures_csv(out, bad), std::out_of_range);
}
