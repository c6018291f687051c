#pragma once

// PNG (8-bit) and binary PPM (P6) reading, 8-bit PNG writing. Samples are
// mapped between bytes and [0, 1] by division by 255.

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"

namespace chromdiff {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// round(255 v) with halves rounded up, after clamping to [0, 1].
inline std::uint8_t quantize(double v) noexcept {
  const double c = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::floor(255.0 * c + 0.5));
}

inline double dequantize(std::uint8_t b) noexcept { return b / 255.0; }

/// Build an image from interleaved 8-bit samples. Gray data is
/// replicated to three identical color channels.
inline PlanarImage from_interleaved(const std::vector<std::uint8_t>& bytes, int width, int height,
                                    int channels) {
  if (width < 3 || height < 3)
    throw FormatError("image is " + std::to_string(width) + "x" + std::to_string(height) +
                      "; at least 3x3 required");
  PlanarImage img(width, height, 3);
  const bool gray = channels <= 2;  // gray or gray+alpha
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const std::size_t base = (static_cast<std::size_t>(y) * width + x) * channels;
      for (int c = 0; c < 3; ++c)
        img.channel(c)(x, y) = dequantize(bytes[base + (gray ? 0 : c)]);
    }
  return img;
}

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.string().c_str(), mode));
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  return f;
}

[[noreturn]] inline void png_error_fn(png_structp png, png_const_charp msg) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  if (err) *err = msg;
  png_longjmp(png, 1);
}

inline void png_warning_fn(png_structp, png_const_charp) {}

inline const char* png_color_name(int color_type) {
  switch (color_type) {
    case PNG_COLOR_TYPE_GRAY: return "gray";
    case PNG_COLOR_TYPE_GRAY_ALPHA: return "gray+alpha";
    case PNG_COLOR_TYPE_RGB: return "rgb";
    case PNG_COLOR_TYPE_RGB_ALPHA: return "rgba";
    case PNG_COLOR_TYPE_PALETTE: return "palette";
  }
  return "unknown";
}

// setjmp-based libpng calls live in functions without non-trivial locals.
inline bool read_png_rows(std::FILE* fp, std::string& err, std::vector<std::uint8_t>& bytes,
                          png_uint_32& width, png_uint_32& height, int& bit_depth,
                          int& color_type, int& channels) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn, png_warning_fn);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr, nullptr, nullptr);
  if (bit_depth != 8 || color_type == PNG_COLOR_TYPE_PALETTE) {
    png_destroy_read_struct(&png, &info, nullptr);
    return true;  // caller reports the unsupported property
  }
  png_read_update_info(png, info);
  channels = png_get_channels(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  bytes.resize(rowbytes * height);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = bytes.data() + y * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

inline bool write_png_rows(std::FILE* fp, std::string& err, const std::vector<std::uint8_t>& bytes,
                           int width, int height, int channels) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn, png_warning_fn);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, width, height, 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  for (int y = 0; y < height; ++y)
    png_write_row(png, const_cast<png_bytep>(bytes.data() + y * stride));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

inline PlanarImage load_png(const std::filesystem::path& path) {
  auto fp = open_file(path, "rb");
  std::string err;
  std::vector<std::uint8_t> bytes;
  png_uint_32 w = 0, h = 0;
  int depth = 0, color = 0, channels = 0;
  if (!read_png_rows(fp.get(), err, bytes, w, h, depth, color, channels))
    throw FormatError("'" + path.string() + "': invalid PNG: " + err);
  if (depth != 8)
    throw FormatError("'" + path.string() + "': unsupported bit depth " + std::to_string(depth) +
                      " (only 8-bit PNG is supported)");
  if (color == PNG_COLOR_TYPE_PALETTE)
    throw FormatError("'" + path.string() + "': unsupported colorspace " + png_color_name(color));
  return from_interleaved(bytes, static_cast<int>(w), static_cast<int>(h), channels);
}

inline void skip_pnm_space(std::istream& in) {
  while (true) {
    const int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      in.get();
    } else {
      return;
    }
  }
}

inline int read_pnm_int(std::istream& in, const std::string& name, const char* what) {
  skip_pnm_space(in);
  int v = -1;
  if (!(in >> v) || v < 0) throw FormatError("'" + name + "': malformed PPM header (" + what + ")");
  return v;
}

inline PlanarImage load_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  const std::string name = path.string();
  char magic[2] = {};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '6')
    throw FormatError("'" + name + "': unsupported PNM variant (only binary P6 is supported)");
  const int w = read_pnm_int(in, name, "width");
  const int h = read_pnm_int(in, name, "height");
  const int maxval = read_pnm_int(in, name, "maxval");
  if (maxval != 255)
    throw FormatError("'" + name + "': unsupported bit depth (maxval " + std::to_string(maxval) +
                      ", only 255 is supported)");
  in.get();  // single whitespace before the raster
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(w) * h * 3);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
    throw FormatError("'" + name + "': truncated PPM raster");
  return from_interleaved(bytes, w, h, 3);
}

}  // namespace detail

/// Load an 8-bit PNG (gray, gray+alpha, RGB or RGBA; alpha dropped, gray
/// replicated) or a binary P6 PPM, chosen by file signature.
inline PlanarImage load(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("cannot open '" + path.string() + "'");
  unsigned char sig[8] = {};
  probe.read(reinterpret_cast<char*>(sig), 8);
  const auto got = probe.gcount();
  probe.close();
  if (got == 8 && png_sig_cmp(sig, 0, 8) == 0) return detail::load_png(path);
  if (got >= 2 && sig[0] == 'P' && sig[1] == '6') return detail::load_ppm(path);
  throw FormatError("'" + path.string() + "': unrecognized image format (expected PNG or P6 PPM)");
}

/// Write an 8-bit PNG: gray for one-channel images, RGB for three.
inline void save(const PlanarImage& img, const std::filesystem::path& path) {
  const int ch = img.channels();
  if (ch != 1 && ch != 3)
    throw std::invalid_argument("save: only 1- or 3-channel images can be written");
  const int w = img.width(), h = img.height();
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(w) * h * ch);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < ch; ++c)
        bytes[(static_cast<std::size_t>(y) * w + x) * ch + c] = quantize(img.channel(c)(x, y));
  auto fp = detail::open_file(path, "wb");
  std::string err;
  if (!detail::write_png_rows(fp.get(), err, bytes, w, h, ch))
    throw IoError("'" + path.string() + "': PNG write failed: " + err);
}

/// Linearly map [min, max] of a plane to [0, 1]; constant planes map to 0.
inline ScalarField rescale_unit(const ScalarField& f) {
  auto v = f.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  ScalarField out(f.width(), f.height());
  const double span = *hi - *lo;
  if (span <= 0.0) return out;
  auto o = out.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = (v[k] - *lo) / span;
  return out;
}

}  // namespace chromdiff
