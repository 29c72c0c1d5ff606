#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigsim/errors.hpp"
#include "sigsim/t_test.hpp"

namespace sigsim {

// 8-bit grayscale raster, row-major, 0 = black.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

// Display mapping. Both halves of a pair must share one scale, otherwise the
// mean shift the figures exist to show would be normalized away.
struct RenderScale {
  double center = 0.0;
  double half_range = 3.0;
};

// pixel = clamp(round(255 * (v - (center - half_range)) / (2 * half_range)), 0, 255),
// rounding half away from zero, filled row-major in sample order.
inline GrayImage render_group(const SampleGroup& samples, int width, int height,
                              const RenderScale& scale) {
  if (width <= 0 || height <= 0
      || static_cast<std::size_t>(width) * static_cast<std::size_t>(height) != samples.size())
    throw std::invalid_argument("render_group: width*height must equal the sample count");
  if (!(scale.half_range > 0.0)) throw std::domain_error("render_group: half_range must be > 0");

  GrayImage image{width, height, {}};
  image.pixels.reserve(samples.size());
  const double low = scale.center - scale.half_range;
  const double span = 2.0 * scale.half_range;
  for (double v : samples) {
    if (!std::isfinite(v)) throw std::domain_error("render_group: samples must be finite");
    const double level = std::round(255.0 * (v - low) / span);
    image.pixels.push_back(static_cast<std::uint8_t>(std::clamp(level, 0.0, 255.0)));
  }
  return image;
}

// Horizontal concatenation with a white separator block between the halves.
inline GrayImage compose_pair(const GrayImage& left, const GrayImage& right,
                              int separator_width = 4) {
  if (left.height != right.height) throw std::invalid_argument("compose_pair: heights must match");
  if (separator_width < 0)
    throw std::invalid_argument("compose_pair: separator width must be >= 0");

  GrayImage out{left.width + separator_width + right.width, left.height, {}};
  out.pixels.reserve(static_cast<std::size_t>(out.width) * out.height);
  for (int y = 0; y < out.height; ++y) {
    const auto* l = left.pixels.data() + static_cast<std::size_t>(y) * left.width;
    const auto* r = right.pixels.data() + static_cast<std::size_t>(y) * right.width;
    out.pixels.insert(out.pixels.end(), l, l + left.width);
    out.pixels.insert(out.pixels.end(), separator_width, std::uint8_t{255});
    out.pixels.insert(out.pixels.end(), r, r + right.width);
  }
  return out;
}

// Binary PGM (P5), header "P5\n<width> <height>\n255\n" followed by raw
// pixels. Byte-deterministic for a fixed image. Returns total bytes written.
inline std::size_t write_pgm(const GrayImage& image, std::ostream& out) {
  if (image.width <= 0 || image.height <= 0
      || image.pixels.size()
             != static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height))
    throw std::invalid_argument("write_pgm: malformed image");
  const std::string header =
      "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw IoError("write_pgm: stream write failed");
  return header.size() + image.pixels.size();
}

inline std::size_t write_pgm_file(const GrayImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("write_pgm: cannot open " + path.string());
  const std::size_t n = write_pgm(image, out);
  out.flush();
  if (!out) throw IoError("write_pgm: flush failed for " + path.string());
  return n;
}

inline GrayImage read_pgm(std::istream& in) {
  std::string magic;
  in >> magic;
  if (magic != "P5") throw IoError("read_pgm: not a binary PGM stream");
  long long width = 0, height = 0, maxval = 0;
  in >> width >> height >> maxval;
  if (!in || width <= 0 || height <= 0 || maxval != 255)
    throw IoError("read_pgm: unsupported or malformed header");
  in.get(); // single whitespace byte after the header
  GrayImage image{static_cast<int>(width), static_cast<int>(height), {}};
  image.pixels.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  in.read(reinterpret_cast<char*>(image.pixels.data()),
          static_cast<std::streamsize>(image.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(image.pixels.size()))
    throw IoError("read_pgm: truncated pixel data");
  return image;
}

inline GrayImage read_pgm_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_pgm: cannot open " + path.string());
  return read_pgm(in);
}

} // namespace sigsim
