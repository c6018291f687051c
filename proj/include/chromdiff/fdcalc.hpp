#pragma once

// Finite-difference operators on scalar planes (unit grid spacing, mirror
// boundary) and separable Gaussian smoothing.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "field.hpp"

namespace chromdiff {

struct Gradient {
  ScalarField dx;
  ScalarField dy;
};

struct Hessian {
  ScalarField xx;
  ScalarField xy;
  ScalarField yy;
};

namespace detail {

// Reflected neighbour indices for offsets -1 and +1 along an axis of length n.
struct NeighbourTable {
  std::vector<int> prev, next;
  explicit NeighbourTable(int n) : prev(n), next(n) {
    for (int i = 0; i < n; ++i) {
      prev[i] = reflect_index(i - 1, n);
      next[i] = reflect_index(i + 1, n);
    }
  }
};

}  // namespace detail

/// Central differences: f_x = (f(x+1,y) - f(x-1,y)) / 2, likewise f_y.
inline Gradient gradient(const ScalarField& f) {
  const int w = f.width(), h = f.height();
  const detail::NeighbourTable cx(w), cy(h);
  Gradient g{ScalarField(w, h), ScalarField(w, h)};
  for (int y = 0; y < h; ++y) {
    const int yp = cy.next[y], ym = cy.prev[y];
    for (int x = 0; x < w; ++x) {
      g.dx(x, y) = 0.5 * (f(cx.next[x], y) - f(cx.prev[x], y));
      g.dy(x, y) = 0.5 * (f(x, yp) - f(x, ym));
    }
  }
  return g;
}

/// Pointwise sqrt(f_x^2 + f_y^2) of the central-difference gradient.
inline ScalarField gradient_magnitude(const ScalarField& f) {
  auto g = gradient(f);
  ScalarField out(f.width(), f.height());
  auto gx = g.dx.values();
  auto gy = g.dy.values();
  auto o = out.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = std::sqrt(gx[k] * gx[k] + gy[k] * gy[k]);
  return out;
}

/// Five-point Laplacian.
inline ScalarField laplacian(const ScalarField& f) {
  const int w = f.width(), h = f.height();
  const detail::NeighbourTable cx(w), cy(h);
  ScalarField out(w, h);
  for (int y = 0; y < h; ++y) {
    const int yp = cy.next[y], ym = cy.prev[y];
    for (int x = 0; x < w; ++x)
      out(x, y) = f(cx.next[x], y) + f(cx.prev[x], y) + f(x, yp) + f(x, ym) - 4.0 * f(x, y);
  }
  return out;
}

/// Second differences; the mixed term uses the four diagonal neighbours.
inline Hessian hessian(const ScalarField& f) {
  const int w = f.width(), h = f.height();
  const detail::NeighbourTable cx(w), cy(h);
  Hessian H{ScalarField(w, h), ScalarField(w, h), ScalarField(w, h)};
  for (int y = 0; y < h; ++y) {
    const int yp = cy.next[y], ym = cy.prev[y];
    for (int x = 0; x < w; ++x) {
      const int xp = cx.next[x], xm = cx.prev[x];
      const double c = f(x, y);
      H.xx(x, y) = f(xp, y) - 2.0 * c + f(xm, y);
      H.yy(x, y) = f(x, yp) - 2.0 * c + f(x, ym);
      H.xy(x, y) = 0.25 * (f(xp, yp) - f(xp, ym) - f(xm, yp) + f(xm, ym));
    }
  }
  return H;
}

/// Sampled 1-D Gaussian exp(-t^2 / 2 sigma^2) for |t| <= ceil(3 sigma),
/// renormalized to unit sum. Index `radius` holds t = 0.
inline std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("gaussian sigma must be >= 0");
  if (sigma == 0.0) return {1.0};
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int t = -radius; t <= radius; ++t) {
    k[t + radius] = std::exp(-(t * t) / (2.0 * sigma * sigma));
    sum += k[t + radius];
  }
  for (auto& v : k) v /= sum;
  return k;
}

/// Separable Gaussian convolution: horizontal pass, then vertical pass.
inline ScalarField gaussian_convolve(const ScalarField& f, double sigma) {
  const auto k = gaussian_kernel(sigma);
  if (k.size() == 1) return f;
  const int r = static_cast<int>(k.size() / 2);
  const int w = f.width(), h = f.height();

  // Horizontal pass over a mirror-padded copy of each row.
  ScalarField tmp(w, h);
  std::vector<double> line(w + 2 * r);
  for (int y = 0; y < h; ++y) {
    for (int i = 0; i < w + 2 * r; ++i) line[i] = f(reflect_index(i - r, w), y);
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int t = 0; t <= 2 * r; ++t) acc += k[t] * line[x + t];
      tmp(x, y) = acc;
    }
  }
  // Vertical pass: accumulate whole rows to stay cache friendly. Taps are
  // summed in the same order as the horizontal pass.
  ScalarField out(w, h);
  auto src = tmp.values();
  auto dst = out.values();
  for (int y = 0; y < h; ++y) {
    double* o = dst.data() + static_cast<std::size_t>(y) * w;
    for (int t = 0; t <= 2 * r; ++t) {
      const double* row = src.data() + static_cast<std::size_t>(reflect_index(y + t - r, h)) * w;
      const double kt = k[t];
      for (int x = 0; x < w; ++x) o[x] += kt * row[x];
    }
  }
  return out;
}

}  // namespace chromdiff
