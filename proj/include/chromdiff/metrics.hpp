#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fdcalc.hpp"
#include "field.hpp"

namespace chromdiff {

/// Sum over pixels of the squared color-vector difference, divided by the
/// pixel count (not the sample count).
inline double mse(const PlanarImage& a, const PlanarImage& b) {
  require_color(a, "mse");
  if (!a.same_shape(b)) throw std::invalid_argument("mse: image dimensions differ");
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) {
    auto av = a.channel(c).values();
    auto bv = b.channel(c).values();
    for (std::size_t k = 0; k < av.size(); ++k) {
      const double d = av[k] - bv[k];
      acc += d * d;
    }
  }
  return acc / static_cast<double>(a.pixel_count());
}

/// 10 log10(3 / MSE); +infinity for identical images.
inline double psnr_from_mse(double m) {
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(3.0 / m);
}

inline double psnr(const PlanarImage& a, const PlanarImage& b) { return psnr_from_mse(mse(a, b)); }

struct SsimParams {
  double dynamic_range = 1.0;
  double k1 = 0.01;
  double k2 = 0.03;
  double window_sigma = 1.5;  // radius ceil(3 * 1.5) = 5, an 11x11 window
};

/// Local SSIM with a Gaussian window. Inputs are clamped to [0, 1] first.
inline ScalarField ssim_map(const ScalarField& a, const ScalarField& b, const SsimParams& p = {}) {
  require_same_shape(a, b, "ssim_map");
  const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
  const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);
  const int w = a.width(), h = a.height();

  ScalarField x(w, h), y(w, h), xx(w, h), yy(w, h), xy(w, h);
  {
    auto av = a.values(), bv = b.values();
    auto xv = x.values(), yv = y.values(), xxv = xx.values(), yyv = yy.values(), xyv = xy.values();
    for (std::size_t k = 0; k < av.size(); ++k) {
      xv[k] = std::clamp(av[k], 0.0, 1.0);
      yv[k] = std::clamp(bv[k], 0.0, 1.0);
      xxv[k] = xv[k] * xv[k];
      yyv[k] = yv[k] * yv[k];
      xyv[k] = xv[k] * yv[k];
    }
  }
  const auto mx = gaussian_convolve(x, p.window_sigma);
  const auto my = gaussian_convolve(y, p.window_sigma);
  const auto sxx = gaussian_convolve(xx, p.window_sigma);
  const auto syy = gaussian_convolve(yy, p.window_sigma);
  const auto sxy = gaussian_convolve(xy, p.window_sigma);

  ScalarField out(w, h);
  auto o = out.values();
  auto mxv = mx.values(), myv = my.values();
  auto sxxv = sxx.values(), syyv = syy.values(), sxyv = sxy.values();
  for (std::size_t k = 0; k < o.size(); ++k) {
    const double mu_x = mxv[k], mu_y = myv[k];
    const double var_x = sxxv[k] - mu_x * mu_x;
    const double var_y = syyv[k] - mu_y * mu_y;
    const double cov = sxyv[k] - mu_x * mu_y;
    o[k] = ((2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)) /
           ((mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2));
  }
  return out;
}

/// Channel-mean SSIM map of two color images.
inline ScalarField combined_ssim_map(const PlanarImage& a, const PlanarImage& b,
                                     const SsimParams& p = {}) {
  require_color(a, "mssim");
  if (!a.same_shape(b)) throw std::invalid_argument("mssim: image dimensions differ");
  ScalarField out(a.width(), a.height());
  for (int c = 0; c < 3; ++c) {
    const auto m = ssim_map(a.channel(c), b.channel(c), p);
    auto o = out.values();
    auto mv = m.values();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] += mv[k] / 3.0;
  }
  return out;
}

/// Mean of the per-channel SSIM maps over all pixels and channels.
inline double mssim(const PlanarImage& a, const PlanarImage& b, const SsimParams& p = {}) {
  require_color(a, "mssim");
  if (!a.same_shape(b)) throw std::invalid_argument("mssim: image dimensions differ");
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto m = ssim_map(a.channel(c), b.channel(c), p);
    for (double v : m.values()) acc += v;
  }
  return acc / (3.0 * static_cast<double>(a.pixel_count()));
}

struct QualityReport {
  double mse = 0.0;
  double psnr_db = 0.0;
  double mssim = 0.0;
  std::optional<ScalarField> ssim_map;  // channel-mean map, on request
};

inline QualityReport evaluate(const PlanarImage& estimate, const PlanarImage& reference,
                              bool with_map = false) {
  QualityReport r;
  r.mse = mse(estimate, reference);
  r.psnr_db = psnr_from_mse(r.mse);
  r.mssim = mssim(estimate, reference);
  if (with_map) r.ssim_map = combined_ssim_map(estimate, reference);
  return r;
}

}  // namespace chromdiff
