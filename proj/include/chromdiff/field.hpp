#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chromdiff {

/// Reflection rule applied to every stencil read outside the grid.
/// Mirror is whole-sample symmetric: a(-1) = a(1), a(n) = a(n-2).
enum class BoundaryRule { mirror };

/// Map an out-of-range index back into [0, n) by whole-sample reflection.
/// Works for offsets larger than the grid (wide Gaussian kernels on small images).
inline int reflect_index(int i, int n) noexcept {
  if (n == 1) return 0;
  const int period = 2 * n - 2;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

/// Dense row-major scalar plane. Dimensions are at least 3x3 so every
/// finite-difference stencil has interior points.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(int width, int height, double fill = 0.0)
      : width_(width), height_(height) {
    if (width < 3 || height < 3)
      throw std::invalid_argument("field dimensions must be at least 3x3, got " +
                                  std::to_string(width) + "x" + std::to_string(height));
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  double operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

  /// Read with mirror reflection for out-of-range coordinates.
  double mirrored(int x, int y) const noexcept {
    return data_[index(reflect_index(x, width_), reflect_index(y, height_))];
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool same_shape(const ScalarField& o) const noexcept {
    return width_ == o.width_ && height_ == o.height_;
  }

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Multi-channel image stored as one plane per channel. Color operations
/// expect three channels (R, G, B); single-channel images are used for
/// diagnostics.
class PlanarImage {
 public:
  PlanarImage() = default;
  PlanarImage(int width, int height, int channels, double fill = 0.0) {
    if (channels < 1) throw std::invalid_argument("image needs at least one channel");
    planes_.assign(channels, ScalarField(width, height, fill));
  }
  explicit PlanarImage(std::vector<ScalarField> planes) : planes_(std::move(planes)) {
    if (planes_.empty()) throw std::invalid_argument("image needs at least one channel");
    for (const auto& p : planes_)
      if (!p.same_shape(planes_.front()))
        throw std::invalid_argument("channel planes differ in size");
  }

  int width() const noexcept { return planes_.empty() ? 0 : planes_.front().width(); }
  int height() const noexcept { return planes_.empty() ? 0 : planes_.front().height(); }
  int channels() const noexcept { return static_cast<int>(planes_.size()); }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width()) * height();
  }

  ScalarField& channel(int c) { return planes_.at(c); }
  const ScalarField& channel(int c) const { return planes_.at(c); }
  std::span<ScalarField> planes() noexcept { return planes_; }
  std::span<const ScalarField> planes() const noexcept { return planes_; }

  bool same_shape(const PlanarImage& o) const noexcept {
    return channels() == o.channels() && width() == o.width() && height() == o.height();
  }

  friend bool operator==(const PlanarImage&, const PlanarImage&) = default;

 private:
  std::vector<ScalarField> planes_;
};

inline void require_color(const PlanarImage& img, const char* what) {
  if (img.channels() != 3)
    throw std::invalid_argument(std::string(what) + ": expected 3 channels, got " +
                                std::to_string(img.channels()));
}

inline void require_same_shape(const ScalarField& a, const ScalarField& b, const char* what) {
  if (!a.same_shape(b))
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                " vs " + std::to_string(b.width()) + "x" +
                                std::to_string(b.height()) + ")");
}

/// Rotate a plane 90 degrees counter-clockwise: out(x', y') = in(W-1-y', x').
inline ScalarField rotate90(const ScalarField& f) {
  ScalarField out(f.height(), f.width());
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) out(x, y) = f(f.width() - 1 - y, x);
  return out;
}

inline PlanarImage rotate90(const PlanarImage& img) {
  std::vector<ScalarField> planes;
  for (const auto& p : img.planes()) planes.push_back(rotate90(p));
  return PlanarImage(std::move(planes));
}

/// Largest absolute sample difference between two equally shaped fields.
inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) m = std::max(m, std::abs(av[k] - bv[k]));
  return m;
}

inline double max_abs_diff(const PlanarImage& a, const PlanarImage& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: image shape mismatch");
  double m = 0.0;
  for (int c = 0; c < a.channels(); ++c) m = std::max(m, max_abs_diff(a.channel(c), b.channel(c)));
  return m;
}

}  // namespace chromdiff
