#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fdcalc.hpp"
#include "field.hpp"

namespace chromdiff {

/// Per-pixel symmetric 2x2 matrix stored as three planes.
struct SymmetricField {
  ScalarField xx;
  ScalarField xy;
  ScalarField yy;

  int width() const noexcept { return xx.width(); }
  int height() const noexcept { return xx.height(); }
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Eigen-structure of the smoothed multigradient at one pixel.
struct StructureSample {
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  Vec2 theta_plus{1.0, 0.0};
  Vec2 theta_minus{0.0, 1.0};
  double edge = 0.0;  // sqrt(lambda_plus + lambda_minus)
};

struct StructureField {
  int width = 0;
  int height = 0;
  std::vector<StructureSample> samples;  // row-major

  const StructureSample& at(int x, int y) const {
    return samples[static_cast<std::size_t>(y) * width + x];
  }
  StructureSample& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }
};

/// Diffusion tensor field. Entries are symmetric positive definite with
/// eigenvalues in (0, 1].
struct TensorField {
  ScalarField t11;
  ScalarField t12;
  ScalarField t22;
};

/// Edge-parallel conductance f-(N) = (1 + N^2)^(-1/2).
inline double conductance_along(double edge) noexcept { return 1.0 / std::sqrt(1.0 + edge * edge); }

/// Edge-normal conductance f+(N) = (1 + N^2)^(-1).
inline double conductance_across(double edge) noexcept { return 1.0 / (1.0 + edge * edge); }

/// K = G_sigma * sum_i grad(U_i) grad(U_i)^T, each entry smoothed separately.
inline SymmetricField multigradient(const PlanarImage& img, double sigma) {
  require_color(img, "multigradient");
  const int w = img.width(), h = img.height();
  SymmetricField k{ScalarField(w, h), ScalarField(w, h), ScalarField(w, h)};
  auto kxx = k.xx.values();
  auto kxy = k.xy.values();
  auto kyy = k.yy.values();
  for (const auto& plane : img.planes()) {
    const auto g = gradient(plane);
    auto gx = g.dx.values();
    auto gy = g.dy.values();
    for (std::size_t i = 0; i < kxx.size(); ++i) {
      kxx[i] += gx[i] * gx[i];
      kxy[i] += gx[i] * gy[i];
      kyy[i] += gy[i] * gy[i];
    }
  }
  return {gaussian_convolve(k.xx, sigma), gaussian_convolve(k.xy, sigma),
          gaussian_convolve(k.yy, sigma)};
}

/// Closed-form eigen-decomposition of one symmetric 2x2 matrix.
inline StructureSample eigen_decompose(double k11, double k12, double k22) noexcept {
  StructureSample s;
  const double mean = 0.5 * (k11 + k22);
  const double half_diff = 0.5 * (k11 - k22);
  const double radius = std::hypot(half_diff, k12);
  s.lambda_plus = std::max(mean + radius, 0.0);
  s.lambda_minus = std::max(mean - radius, 0.0);
  s.edge = std::sqrt(s.lambda_plus + s.lambda_minus);

  if (radius >= 1e-12 * std::max(1.0, std::abs(mean))) {
    // Two algebraically equivalent eigenvector forms; take the better
    // conditioned one.
    const double lp = mean + radius;
    Vec2 a{k12, lp - k11};
    Vec2 b{lp - k22, k12};
    const double na = std::hypot(a.x, a.y);
    const double nb = std::hypot(b.x, b.y);
    const Vec2 v = na >= nb ? Vec2{a.x / na, a.y / na} : Vec2{b.x / nb, b.y / nb};
    s.theta_plus = v;
    s.theta_minus = Vec2{-v.y, v.x};
  }
  return s;
}

inline StructureField eigen_decompose(const SymmetricField& k) {
  StructureField s{k.width(), k.height(), {}};
  s.samples.resize(k.xx.size());
  auto a = k.xx.values();
  auto b = k.xy.values();
  auto c = k.yy.values();
  for (std::size_t i = 0; i < s.samples.size(); ++i) s.samples[i] = eigen_decompose(a[i], b[i], c[i]);
  return s;
}

/// T = f-(N) theta- theta-^T + f+(N) theta+ theta+^T.
inline TensorField build_tensor(const StructureField& s) {
  TensorField t{ScalarField(s.width, s.height), ScalarField(s.width, s.height),
                ScalarField(s.width, s.height)};
  auto t11 = t.t11.values();
  auto t12 = t.t12.values();
  auto t22 = t.t22.values();
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    const auto& p = s.samples[i];
    const double along = conductance_along(p.edge);
    const double across = conductance_across(p.edge);
    const Vec2& m = p.theta_minus;
    const Vec2& n = p.theta_plus;
    t11[i] = along * m.x * m.x + across * n.x * n.x;
    t12[i] = along * m.x * m.y + across * n.x * n.y;
    t22[i] = along * m.y * m.y + across * n.y * n.y;
  }
  return t;
}

}  // namespace chromdiff
