#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "field.hpp"

namespace chromdiff {

/// Name recorded in reports so noisy inputs can be regenerated.
inline constexpr const char* kNoiseAlgorithm = "splitmix64-counter/box-muller";

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform in (0, 1] from the top 53 bits.
constexpr double unit_open(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace detail

/// Standard normal deviate for sample `index` of stream `seed`. Each sample is
/// a pure function of (seed, index), so any partition of the index space
/// reproduces the sequential result.
inline double gaussian_at(std::uint64_t seed, std::uint64_t index) noexcept {
  const std::uint64_t key = detail::splitmix64(seed);
  const double u1 = detail::unit_open(detail::splitmix64(key ^ (2 * index)));
  const double u2 = detail::unit_open(detail::splitmix64(key ^ (2 * index + 1)));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Adds N(0, (sigma_n / 255)^2) independently to every sample. No clamping.
inline PlanarImage add_gaussian_noise(const PlanarImage& img, double sigma_n, std::uint64_t seed) {
  if (!(sigma_n >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
  PlanarImage out = img;
  if (sigma_n == 0.0) return out;
  const double scale = sigma_n / 255.0;
  std::uint64_t index = 0;
  for (auto& plane : out.planes())
    for (auto& v : plane.values()) v += scale * gaussian_at(seed, index++);
  return out;
}

}  // namespace chromdiff
