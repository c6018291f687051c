#pragma once

#include <chromdiff/chromdiff.hpp>

#include <algorithm>
#include <cstdint>
#include <random>

namespace chromdiff::testing {

inline ScalarField random_field(int w, int h, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  ScalarField f(w, h);
  for (double& v : f.values()) v = dist(rng);
  return f;
}

inline PlanarImage random_image(int w, int h, std::uint64_t seed) {
  return PlanarImage({random_field(w, h, seed), random_field(w, h, seed + 1000),
                      random_field(w, h, seed + 2000)});
}

/// Smooth random image: random field blurred so the structure tensor sees
/// genuine edges rather than white noise.
inline PlanarImage smooth_random_image(int w, int h, std::uint64_t seed, double blur = 1.5) {
  PlanarImage img = random_image(w, h, seed);
  for (auto& p : img.planes()) p = gaussian_convolve(p, blur);
  return img;
}

/// Random colored rectangles over a random background: piecewise-constant
/// structure that survives TV smoothing.
inline PlanarImage random_blocks(int w, int h, std::uint64_t seed, int count = 6) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PlanarImage img(w, h, 3);
  for (auto& p : img.planes()) p = ScalarField(w, h, unit(rng));
  for (int r = 0; r < count; ++r) {
    const int x0 = static_cast<int>(unit(rng) * w), y0 = static_cast<int>(unit(rng) * h);
    const int x1 = std::min(w, x0 + 4 + static_cast<int>(unit(rng) * w / 2));
    const int y1 = std::min(h, y0 + 4 + static_cast<int>(unit(rng) * h / 2));
    const double color[3] = {unit(rng), unit(rng), unit(rng)};
    for (int c = 0; c < 3; ++c)
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) img.channel(c)(x, y) = color[c];
  }
  return img;
}

inline ScalarField field_from(int w, int h, auto&& fn) {
  ScalarField f(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) f(x, y) = fn(static_cast<double>(x), static_cast<double>(y));
  return f;
}

inline double max_channel_spread(const PlanarImage& img) {
  double spread = 0.0;
  for (int c = 1; c < 3; ++c) spread = std::max(spread, max_abs_diff(img.channel(0), img.channel(c)));
  return spread;
}

}  // namespace chromdiff::testing
