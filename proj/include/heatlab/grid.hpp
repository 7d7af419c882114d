#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "heatlab/common.hpp"
#include "heatlab/fft.hpp"

namespace heatlab {

/// Discretized torus [-Λ/2, Λ/2)^n standing in for R^n. Samples are cell
/// centers x_i = -Λ/2 + i·h with h = Λ/M; the frequency lattice is
/// ξ_k = 2πk/Λ with integer k in [-M/2, M/2).
class TorusGrid {
 public:
  TorusGrid(int dim, double side_length, int samples_per_dim)
      : dim_(dim), side_(side_length), samples_(samples_per_dim) {
    if (dim < 1) fail(Errc::InvalidGrid, "dimension must be >= 1");
    if (!(side_length > 0.0)) fail(Errc::InvalidGrid, "side length must be positive");
    if (samples_per_dim < 4 || samples_per_dim % 2 != 0)
      fail(Errc::InvalidGrid, "samples per dim must be even and >= 4");
    spacing_ = side_ / samples_;
    points_ = 1;
    for (int d = 0; d < dim_; ++d) points_ *= static_cast<std::size_t>(samples_);
  }

  int dim() const { return dim_; }
  double side_length() const { return side_; }
  int samples_per_dim() const { return samples_; }
  double spacing() const { return spacing_; }
  std::size_t point_count() const { return points_; }

  /// Largest representable |ξ| per axis, π·M/Λ. Band limits must stay below it.
  double max_frequency() const { return kPi * samples_ / side_; }

  double cell_volume() const { return std::pow(spacing_, dim_); }
  /// Quadrature weight of one frequency cell, (2π/Λ)^n.
  double freq_cell_volume() const { return std::pow(kTwoPi / side_, dim_); }

  double coordinate(int idx) const { return -0.5 * side_ + spacing_ * idx; }

  /// FFT-layout index -> signed integer frequency index.
  int freq_index(int layout) const { return layout < samples_ / 2 ? layout : layout - samples_; }
  double frequency(int signed_index) const { return kTwoPi * signed_index / side_; }

  /// Per-axis layout index of a flat row-major index (axis 0 = slowest).
  int axis_index(std::size_t flat, int axis) const {
    std::size_t stride = 1;
    for (int d = dim_ - 1; d > axis; --d) stride *= static_cast<std::size_t>(samples_);
    return static_cast<int>((flat / stride) % static_cast<std::size_t>(samples_));
  }

  void decode(std::size_t flat, std::span<int> out) const {
    for (int d = dim_ - 1; d >= 0; --d) {
      out[static_cast<std::size_t>(d)] = static_cast<int>(flat % static_cast<std::size_t>(samples_));
      flat /= static_cast<std::size_t>(samples_);
    }
  }

  void point(std::size_t flat, std::span<double> out) const {
    for (int d = dim_ - 1; d >= 0; --d) {
      out[static_cast<std::size_t>(d)] =
          coordinate(static_cast<int>(flat % static_cast<std::size_t>(samples_)));
      flat /= static_cast<std::size_t>(samples_);
    }
  }

  bool operator==(const TorusGrid& o) const {
    return dim_ == o.dim_ && side_ == o.side_ && samples_ == o.samples_;
  }
  bool operator!=(const TorusGrid& o) const { return !(*this == o); }

 private:
  int dim_;
  double side_;
  int samples_;
  double spacing_ = 0.0;
  std::size_t points_ = 0;
};

inline TorusGrid make_grid(int dim, double side_length, int samples_per_dim) {
  return TorusGrid(dim, side_length, samples_per_dim);
}

/// Complex samples on a grid, one value per cell, row-major.
struct GridFunction {
  TorusGrid grid;
  std::vector<cplx> values;
};

/// Complex Fourier coefficients in FFT layout (DC first, per axis).
/// Coefficient k approximates the continuum transform f̂(ξ_k) under the
/// (2π)^{-n/2} convention.
struct SpectrumFunction {
  TorusGrid grid;
  std::vector<cplx> coeffs;
};

inline GridFunction zeros(const TorusGrid& grid) {
  return GridFunction{grid, std::vector<cplx>(grid.point_count(), cplx{0.0, 0.0})};
}

template <class F>
GridFunction sample(const TorusGrid& grid, F&& f) {
  GridFunction out{grid, std::vector<cplx>(grid.point_count())};
  std::vector<double> x(static_cast<std::size_t>(grid.dim()));
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    grid.point(i, x);
    out.values[i] = cplx(f(std::span<const double>(x)));
  }
  return out;
}

namespace detail {

/// Parity of the sum of layout indices; realizes the boundary phase
/// e^{iΛξ_k/2} = (-1)^{k_1+...+k_n} of the [-Λ/2, Λ/2) box.
inline double phase_sign(const TorusGrid& g, std::size_t flat) {
  int parity = 0;
  for (int d = 0; d < g.dim(); ++d) parity ^= (g.axis_index(flat, d) & 1);
  return parity ? -1.0 : 1.0;
}

}  // namespace detail

inline SpectrumFunction forward_transform(const GridFunction& f) {
  if (!all_finite(f.values)) fail(Errc::NonFiniteInput, "forward transform of non-finite samples");
  SpectrumFunction out{f.grid, f.values};
  dft_cube(out.coeffs.data(), f.grid.dim(), f.grid.samples_per_dim(), /*inverse=*/false);
  const double scale =
      std::pow(f.grid.spacing() / std::sqrt(kTwoPi), f.grid.dim());
  for (std::size_t i = 0; i < out.coeffs.size(); ++i)
    out.coeffs[i] *= scale * detail::phase_sign(f.grid, i);
  return out;
}

inline GridFunction inverse_transform(const SpectrumFunction& s) {
  if (!all_finite(s.coeffs)) fail(Errc::NonFiniteInput, "inverse transform of non-finite spectrum");
  GridFunction out{s.grid, s.coeffs};
  const double scale =
      std::pow(std::sqrt(kTwoPi) / s.grid.side_length(), s.grid.dim());
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] *= scale * detail::phase_sign(s.grid, i);
  dft_cube(out.values.data(), s.grid.dim(), s.grid.samples_per_dim(), /*inverse=*/true);
  return out;
}

/// Boolean mask over grid cells (defined here so integrate can take one;
/// construction lives in sets.hpp).
struct IndicatorMask {
  TorusGrid grid;
  std::vector<std::uint8_t> bits;

  std::size_t true_count() const {
    std::size_t c = 0;
    for (auto b : bits) c += b;
    return c;
  }
  double measure() const { return static_cast<double>(true_count()) * grid.cell_volume(); }
};

enum class Integrand { Values, SquaredModulus };

/// Riemann sum h^n Σ over (masked) cells. Values integrates the real part.
inline double integrate(const GridFunction& f, Integrand integrand,
                        const IndicatorMask* mask = nullptr) {
  if (mask && mask->grid != f.grid) fail(Errc::GridMismatch, "mask lives on a different grid");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (mask && !mask->bits[i]) continue;
    acc += integrand == Integrand::SquaredModulus ? std::norm(f.values[i]) : f.values[i].real();
  }
  return acc * f.grid.cell_volume();
}

inline double energy(const GridFunction& f, const IndicatorMask* mask = nullptr) {
  return integrate(f, Integrand::SquaredModulus, mask);
}

inline double spectral_energy(const SpectrumFunction& s) {
  double acc = 0.0;
  for (const auto& c : s.coeffs) acc += std::norm(c);
  return acc * s.grid.freq_cell_volume();
}

/// Physical L² inner product h^n Σ conj(u)·v.
inline cplx inner(const GridFunction& u, const GridFunction& v) {
  if (u.grid != v.grid) fail(Errc::GridMismatch, "inner product across grids");
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < u.values.size(); ++i) acc += std::conj(u.values[i]) * v.values[i];
  return acc * u.grid.cell_volume();
}

inline double norm_l2(const GridFunction& u) { return std::sqrt(energy(u)); }

inline constexpr int kMaxDerivativeOrder = 6;

/// Exact differentiation on the frequency lattice: inverse transform of
/// (iξ)^β f̂. Nyquist rows of odd-order axes are zeroed so derivatives of real
/// inputs stay real; band-limited inputs never touch those rows.
inline GridFunction spectral_derivative(const GridFunction& f, std::span<const int> beta,
                                        int max_order = kMaxDerivativeOrder) {
  if (static_cast<int>(beta.size()) != f.grid.dim())
    fail(Errc::PreconditionFailed, "multi-index length must equal grid dimension");
  int total = 0;
  for (int b : beta) {
    if (b < 0) fail(Errc::PreconditionFailed, "multi-index entries must be >= 0");
    total += b;
  }
  if (total > max_order) fail(Errc::OrderTooHigh, "derivative order exceeds configured max");
  if (total == 0) return f;

  SpectrumFunction s = forward_transform(f);
  const int m = f.grid.samples_per_dim();
  static const cplx i_pow[4] = {cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};

  // Per-axis tables of (iξ)^{β_d}; Nyquist entry zeroed for odd β_d.
  std::vector<std::vector<cplx>> table(static_cast<std::size_t>(f.grid.dim()));
  for (int d = 0; d < f.grid.dim(); ++d) {
    auto& t = table[static_cast<std::size_t>(d)];
    t.assign(static_cast<std::size_t>(m), cplx{1.0, 0.0});
    const int b = beta[static_cast<std::size_t>(d)];
    if (b == 0) continue;
    for (int layout = 0; layout < m; ++layout) {
      const int k = f.grid.freq_index(layout);
      if (k == -m / 2 && b % 2 == 1) {
        t[static_cast<std::size_t>(layout)] = cplx{0.0, 0.0};
        continue;
      }
      const double xi = f.grid.frequency(k);
      t[static_cast<std::size_t>(layout)] = i_pow[b % 4] * std::pow(xi, b);
    }
  }

  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    cplx factor{1.0, 0.0};
    for (int d = 0; d < f.grid.dim(); ++d)
      factor *= table[static_cast<std::size_t>(d)][static_cast<std::size_t>(f.grid.axis_index(i, d))];
    s.coeffs[i] *= factor;
  }
  return inverse_transform(s);
}

/// |ξ_k|² of the mode at a flat layout index.
inline double freq_norm2(const TorusGrid& g, std::size_t flat) {
  double acc = 0.0;
  for (int d = 0; d < g.dim(); ++d)
    acc += sq(g.frequency(g.freq_index(g.axis_index(flat, d))));
  return acc;
}

/// Fraction of |f|² mass in the outermost shell (default: cells with
/// max_d |x_d| >= 95% of Λ/2). Experiments treat a fraction above threshold
/// as PERIODIZATION_RISK.
inline double boundary_tail_fraction(const GridFunction& f, double shell = 0.05) {
  const double cut = (1.0 - shell) * 0.5 * f.grid.side_length();
  double tail = 0.0, total = 0.0;
  std::vector<double> x(static_cast<std::size_t>(f.grid.dim()));
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double m = std::norm(f.values[i]);
    total += m;
    f.grid.point(i, x);
    double maxc = 0.0;
    for (double c : x) maxc = std::max(maxc, std::abs(c));
    if (maxc >= cut) tail += m;
  }
  return total > 0.0 ? tail / total : 0.0;
}

inline constexpr double kTailThreshold = 1e-12;
inline constexpr double kTailThresholdStrict = 1e-14;

inline bool periodization_ok(const GridFunction& f, double threshold = kTailThreshold) {
  return boundary_tail_fraction(f) <= threshold;
}

}  // namespace heatlab
