#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "fdcalc.hpp"
#include "field.hpp"
#include "structure_tensor.hpp"
#include "tv_weights.hpp"

namespace chromdiff {

enum class SchemeKind { Proposed, TD, PeronaMalik };

inline const char* scheme_name(SchemeKind k) noexcept {
  switch (k) {
    case SchemeKind::Proposed: return "Proposed";
    case SchemeKind::TD: return "TD";
    case SchemeKind::PeronaMalik: return "PeronaMalik";
  }
  return "?";
}

/// Largest coupling gain for which the chroma part of the coupled scheme never
/// diffuses backward on [0, 1] data. With central differences each gradient
/// component is at most 1/2, so N^2 <= 3/2 over three channels and
/// f+(N) >= 1 / (1 + 3/2). For g <= f+(N) the tensor T - g I stays positive
/// semidefinite, and trace((T - g I) H) is what a chroma perturbation sees.
inline constexpr double kStableCouplingGain = 0.4;

struct DiffusionConfig {
  double sigma = 2.0;  // multigradient smoothing
  double dt = 0.2;
  int iterations = 40;
  bool coupling_enabled = true;
  double coupling_gain = kStableCouplingGain;  // 1 is the bare equation; unstable
  TvConfig tv{};
  BoundaryRule boundary = BoundaryRule::mirror;
  double pm_kappa = 0.05;

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
    if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
    if (!(coupling_gain >= 0.0)) throw std::invalid_argument("coupling gain must be >= 0");
    if (!(pm_kappa > 0.0)) throw std::invalid_argument("pm kappa must be > 0");
    tv.validate();
  }
};

/// Raised when the explicit scheme produces a non-finite sample.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(int iteration)
      : std::runtime_error("diffusion diverged at iteration " + std::to_string(iteration)),
        iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

/// Called after every completed iteration with the 1-based iteration index.
using IterationObserver = std::function<void(int, const PlanarImage&)>;

namespace detail {

inline ScalarField coupling_from_laplacians(const std::array<ScalarField, 3>& lap,
                                            const WeightField& weights, int channel) {
  // Pairwise form: exactly zero when the channels agree, whatever the rounding
  // of the weights.
  const int j = (channel + 1) % 3, m = (channel + 2) % 3;
  ScalarField out(lap[0].width(), lap[0].height());
  auto o = out.values();
  auto li = lap[channel].values(), lj = lap[j].values(), lm = lap[m].values();
  auto wi = weights[channel].values(), wj = weights[j].values(), wm = weights[m].values();
  for (std::size_t k = 0; k < o.size(); ++k)
    o[k] = (wi[k] * lj[k] - wj[k] * li[k]) + (wi[k] * lm[k] - wm[k] * li[k]);
  return out;
}

inline ScalarField trace_from_hessian(const Hessian& H, const TensorField& T) {
  ScalarField out(H.xx.width(), H.xx.height());
  auto o = out.values();
  auto hxx = H.xx.values(), hxy = H.xy.values(), hyy = H.yy.values();
  auto a = T.t11.values(), b = T.t12.values(), c = T.t22.values();
  for (std::size_t k = 0; k < o.size(); ++k)
    o[k] = a[k] * hxx[k] + 2.0 * b[k] * hxy[k] + c[k] * hyy[k];
  return out;
}

inline void check_finite(const PlanarImage& u, int iteration) {
  for (const auto& p : u.planes())
    for (double v : p.values())
      if (!std::isfinite(v)) throw DivergenceError(iteration);
}

}  // namespace detail

/// f_C(U_i) = sum_j (w_i dU_j - w_j dU_i), which is w_i sum_j dU_j - dU_i when sum_j w_j = 1.
inline ScalarField coupling_term(const PlanarImage& u, const WeightField& weights, int channel) {
  require_color(u, "coupling_term");
  if (channel < 0 || channel > 2) throw std::out_of_range("channel index must be 0, 1 or 2");
  std::array<ScalarField, 3> lap{laplacian(u.channel(0)), laplacian(u.channel(1)),
                                 laplacian(u.channel(2))};
  return detail::coupling_from_laplacians(lap, weights, channel);
}

/// trace(T H_i) = t11 U_xx + 2 t12 U_xy + t22 U_yy.
inline ScalarField trace_step_field(const PlanarImage& u, const TensorField& tensor, int channel) {
  return detail::trace_from_hessian(hessian(u.channel(channel)), tensor);
}

/// Diffusion tensor of the current state.
inline TensorField diffusion_tensor(const PlanarImage& u, double sigma) {
  return build_tensor(eigen_decompose(multigradient(u, sigma)));
}

/// One explicit step of the trace scheme, with the weighted Laplacian coupling
/// when `weights` is given. All channels advance from the same snapshot.
inline PlanarImage trace_scheme_step(const PlanarImage& u, const DiffusionConfig& cfg,
                                     const WeightField* weights) {
  const TensorField tensor = diffusion_tensor(u, cfg.sigma);
  std::array<ScalarField, 3> velocity;
  for (int c = 0; c < 3; ++c) velocity[c] = trace_step_field(u, tensor, c);

  if (weights != nullptr) {
    std::array<ScalarField, 3> lap{laplacian(u.channel(0)), laplacian(u.channel(1)),
                                   laplacian(u.channel(2))};
    for (int c = 0; c < 3; ++c) {
      const auto coupling = detail::coupling_from_laplacians(lap, *weights, c);
      auto v = velocity[c].values();
      auto f = coupling.values();
      for (std::size_t k = 0; k < v.size(); ++k) v[k] += cfg.coupling_gain * f[k];
    }
  }

  PlanarImage next = u;
  for (int c = 0; c < 3; ++c) {
    auto out = next.channel(c).values();
    auto v = velocity[c].values();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += cfg.dt * v[k];
  }
  return next;
}

/// Perona-Malik step per channel with g(s) = 1 / (1 + (s / kappa)^2) on the
/// four neighbour differences.
inline PlanarImage perona_malik_step(const PlanarImage& u, const DiffusionConfig& cfg) {
  const double inv_k2 = 1.0 / (cfg.pm_kappa * cfg.pm_kappa);
  auto g = [inv_k2](double d) { return d / (1.0 + d * d * inv_k2); };
  PlanarImage next = u;
  for (int c = 0; c < u.channels(); ++c) {
    const auto& f = u.channel(c);
    auto& out = next.channel(c);
    for (int y = 0; y < f.height(); ++y)
      for (int x = 0; x < f.width(); ++x) {
        const double center = f(x, y);
        const double flux = g(f.mirrored(x + 1, y) - center) + g(f.mirrored(x - 1, y) - center) +
                            g(f.mirrored(x, y + 1) - center) + g(f.mirrored(x, y - 1) - center);
        out(x, y) = center + cfg.dt * flux;
      }
  }
  return next;
}

/// Weights the proposed scheme uses, or nothing when the coupling is off.
inline std::optional<WeightField> coupling_weights(const PlanarImage& u0, const DiffusionConfig& cfg,
                                                   SchemeKind kind) {
  if (kind != SchemeKind::Proposed || !cfg.coupling_enabled || cfg.coupling_gain == 0.0)
    return std::nullopt;
  return weights_from_input(u0, cfg.tv);
}

/// Evolve `u0` for cfg.iterations explicit steps of the chosen scheme.
/// The result is not clamped.
inline PlanarImage denoise(const PlanarImage& u0, const DiffusionConfig& cfg, SchemeKind kind,
                           const IterationObserver& observer = {}) {
  require_color(u0, "denoise");
  cfg.validate();
  const auto weights = coupling_weights(u0, cfg, kind);

  PlanarImage u = u0;
  for (int it = 1; it <= cfg.iterations; ++it) {
    if (kind == SchemeKind::PeronaMalik)
      u = perona_malik_step(u, cfg);
    else
      u = trace_scheme_step(u, cfg, weights ? &*weights : nullptr);
    detail::check_finite(u, it);
    if (observer) observer(it, u);
  }
  return u;
}

}  // namespace chromdiff
