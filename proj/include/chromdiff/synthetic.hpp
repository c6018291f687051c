#pragma once

// Procedural clean test images with strong chromatic edges.

#include <array>
#include <cmath>
#include <numbers>

#include "field.hpp"

namespace chromdiff::synthetic {

using Rgb = std::array<double, 3>;

inline PlanarImage fill(int width, int height, auto&& color_at) {
  PlanarImage img(width, height, 3);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const Rgb c = color_at(x, y);
      for (int k = 0; k < 3; ++k) img.channel(k)(x, y) = c[k];
    }
  return img;
}

/// Red disk on a blue background.
inline PlanarImage disk(int size, Rgb inside = {0.9, 0.1, 0.1}, Rgb outside = {0.1, 0.2, 0.8}) {
  const double c = 0.5 * (size - 1), r = 0.3 * size;
  return fill(size, size, [&](int x, int y) {
    return std::hypot(x - c, y - c) <= r ? inside : outside;
  });
}

/// Vertical stripes cycling through three saturated colors.
inline PlanarImage stripes(int size, int period = 16) {
  const std::array<Rgb, 3> palette{Rgb{0.85, 0.15, 0.2}, Rgb{0.2, 0.75, 0.25},
                                   Rgb{0.2, 0.25, 0.85}};
  return fill(size, size, [&](int x, int) { return palette[(x / period) % 3]; });
}

/// Checkerboard of two colors with similar luminance.
inline PlanarImage checkerboard(int size, int cell = 16) {
  const Rgb a{0.8, 0.3, 0.2}, b{0.2, 0.5, 0.7};
  return fill(size, size, [&](int x, int y) { return ((x / cell + y / cell) % 2) ? a : b; });
}

/// Smooth shading plus a few hard-edged shapes; a stand-in for a natural photo.
inline PlanarImage scene(int size) {
  const double s = size;
  return fill(size, size, [&](int x, int y) {
    const double u = x / s, v = y / s;
    Rgb c{0.35 + 0.3 * u, 0.45 + 0.2 * std::sin(std::numbers::pi * v), 0.6 - 0.3 * v};
    if (std::hypot(u - 0.3, v - 0.35) < 0.18) c = {0.85, 0.2 + 0.2 * v, 0.15};
    if (u > 0.55 && u < 0.85 && v > 0.5 && v < 0.8) c = {0.15, 0.6, 0.3 + 0.3 * u};
    if (std::abs(u - v) < 0.02) c = {0.95, 0.9, 0.2};
    return c;
  });
}

/// Achromatic copy: every channel equals the channel mean.
inline PlanarImage achromatic(const PlanarImage& img) {
  PlanarImage out = img;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const double m =
          (img.channel(0)(x, y) + img.channel(1)(x, y) + img.channel(2)(x, y)) / 3.0;
      for (int k = 0; k < 3; ++k) out.channel(k)(x, y) = m;
    }
  return out;
}

}  // namespace chromdiff::synthetic
