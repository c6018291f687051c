#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "fdcalc.hpp"
#include "field.hpp"

namespace chromdiff {

struct TvConfig {
  int iterations = 50;
  double dt = 0.1;
  double rho = 2.0;

  void validate() const {
    if (iterations < 0) throw std::invalid_argument("tv iterations must be >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("tv time step must be > 0");
    if (!(rho >= 0.0)) throw std::invalid_argument("rho must be >= 0");
  }
};

/// Per-pixel channel weights; the three planes sum to one at every pixel.
struct WeightField {
  std::array<ScalarField, 3> w;

  const ScalarField& operator[](int c) const { return w.at(c); }
  ScalarField& operator[](int c) { return w.at(c); }
};

/// Discrete total variation: sum of absolute forward differences along both axes.
inline double total_variation(const ScalarField& f) {
  const int w = f.width(), h = f.height();
  double tv = 0.0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (x + 1 < w) tv += std::abs(f(x + 1, y) - f(x, y));
      if (y + 1 < h) tv += std::abs(f(x, y + 1) - f(x, y));
    }
  return tv;
}

/// Exact 1-D total-variation proximal map:
///   out = argmin_x 1/2 |x - in|^2 + lambda * sum_k |x[k+1] - x[k]|
/// Condat's direct (taut-string-like) algorithm, linear in practice.
/// `in` and `out` may not alias.
inline void tv_prox_1d(std::span<const double> in, std::span<double> out, double lambda) {
  const int n = static_cast<int>(in.size());
  if (n == 0) return;
  if (lambda <= 0.0 || n == 1) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  const double two_lambda = 2.0 * lambda;
  int k = 0, k0 = 0;          // current sample, start of the current segment
  int kplus = 0, kminus = 0;  // last positions where the dual hit -lambda / +lambda
  double umin = lambda, umax = -lambda;  // dual variable bounds
  double vmin = in[0] - lambda, vmax = in[0] + lambda;  // segment value bounds

  for (;;) {
    while (k == n - 1) {
      if (umin < 0.0) {
        do out[k0++] = vmin; while (k0 <= kminus);
        k = kminus = k0;
        vmin = in[k];
        umin = lambda;
        umax = vmin + umin - vmax;
      } else if (umax > 0.0) {
        do out[k0++] = vmax; while (k0 <= kplus);
        k = kplus = k0;
        vmax = in[k];
        umax = -lambda;
        umin = vmax + umax - vmin;
      } else {
        vmin += umin / (k - k0 + 1);
        do out[k0++] = vmin; while (k0 <= k);
        return;
      }
    }
    umin += in[k + 1] - vmin;
    if (umin < -lambda) {  // negative jump
      do out[k0++] = vmin; while (k0 <= kminus);
      k = kminus = kplus = k0;
      vmin = in[k];
      vmax = vmin + two_lambda;
      umin = lambda;
      umax = -lambda;
      continue;
    }
    umax += in[k + 1] - vmax;
    if (umax > lambda) {  // positive jump
      do out[k0++] = vmax; while (k0 <= kplus);
      k = kminus = kplus = k0;
      vmax = in[k];
      vmin = vmax - two_lambda;
      umin = lambda;
      umax = -lambda;
      continue;
    }
    ++k;
    if (umin >= lambda) {
      kminus = k;
      vmin += (umin - lambda) / (kminus - k0 + 1);
      umin = lambda;
    }
    if (umax <= -lambda) {
      kplus = k;
      vmax += (umax + lambda) / (kplus - k0 + 1);
      umax = -lambda;
    }
  }
}

namespace detail {

inline void tv_prox_rows(ScalarField& u, double dt) {
  const int w = u.width(), h = u.height();
  std::vector<double> line(w);
  auto data = u.values();
  for (int y = 0; y < h; ++y) {
    auto row = data.subspan(static_cast<std::size_t>(y) * w, w);
    std::copy(row.begin(), row.end(), line.begin());
    tv_prox_1d(line, row, dt);
  }
}

inline ScalarField transpose(const ScalarField& f) {
  ScalarField t(f.height(), f.width());
  for (int y = 0; y < f.height(); ++y)
    for (int x = 0; x < f.width(); ++x) t(y, x) = f(x, y);
  return t;
}

// One implicit step of the TV flow, split by axis: the exact 1-D proximal
// map with weight dt along rows and along columns. The 1-D map is
// order-preserving and mean-preserving, hence L1-contractive, so no pass can
// raise total_variation(). Both pass orders are averaged; TV is convex, so the
// average keeps that guarantee, and a 90 degree rotation of the input only
// swaps the two orders.
inline void tv_split_step(ScalarField& u, double dt) {
  ScalarField rows_first = u;
  tv_prox_rows(rows_first, dt);
  ScalarField t = transpose(rows_first);
  tv_prox_rows(t, dt);
  rows_first = transpose(t);

  ScalarField cols_first = transpose(u);
  tv_prox_rows(cols_first, dt);
  t = transpose(cols_first);
  tv_prox_rows(t, dt);

  auto a = rows_first.values(), b = t.values(), o = u.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = 0.5 * (a[k] + b[k]);
}

}  // namespace detail

/// Total-variation flow applied per channel: cfg.iterations implicit steps of
/// size cfg.dt.
inline PlanarImage tv_smooth(const PlanarImage& u0, const TvConfig& cfg) {
  cfg.validate();
  PlanarImage u = u0;
  for (auto& plane : u.planes())
    for (int it = 0; it < cfg.iterations; ++it) detail::tv_split_step(plane, cfg.dt);
  return u;
}

/// omega_i = |G_rho * |grad U~_i|| / sum_j |G_rho * |grad U~_j||, with the
/// uniform split where the denominator vanishes.
inline WeightField compute_weights(const PlanarImage& smoothed, double rho) {
  require_color(smoothed, "compute_weights");
  std::array<ScalarField, 3> mag;
  for (int c = 0; c < 3; ++c) {
    mag[c] = gaussian_convolve(gradient_magnitude(smoothed.channel(c)), rho);
    for (auto& v : mag[c].values()) v = std::abs(v);
  }
  WeightField out{mag};
  auto m0 = mag[0].values(), m1 = mag[1].values(), m2 = mag[2].values();
  auto w0 = out[0].values(), w1 = out[1].values(), w2 = out[2].values();
  for (std::size_t i = 0; i < m0.size(); ++i) {
    const double denom = m0[i] + m1[i] + m2[i];
    if (denom < 1e-12) {
      w0[i] = w1[i] = w2[i] = 1.0 / 3.0;
    } else {
      w0[i] = m0[i] / denom;
      w1[i] = m1[i] / denom;
      w2[i] = m2[i] / denom;
    }
  }
  return out;
}

/// Weights from the noisy input: TV-smooth, then normalize smoothed gradient magnitudes.
inline WeightField weights_from_input(const PlanarImage& u0, const TvConfig& cfg) {
  return compute_weights(tv_smooth(u0, cfg), cfg.rho);
}

}  // namespace chromdiff
