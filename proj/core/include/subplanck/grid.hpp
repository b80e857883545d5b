#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace subplanck {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Uniform periodic position grid. The momentum grid is derived from it:
/// dp = 2*pi*hbar/(n*dx), p_j = (j - n/2)*dp for j = 0..n-1.
class GridSpec {
 public:
  /// Throws DomainError unless n is a power of two >= 16, dx > 0 and hbar > 0.
  GridSpec(std::size_t n, double x_min, double dx, double hbar);

  /// Grid of n points centred on the origin.
  static GridSpec centered(std::size_t n, double dx, double hbar);

  std::size_t n() const noexcept { return n_; }
  double x_min() const noexcept { return x_min_; }
  double dx() const noexcept { return dx_; }
  double hbar() const noexcept { return hbar_; }

  double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * dx_; }
  double x_max() const noexcept { return x(n_ - 1); }
  double extent() const noexcept { return static_cast<double>(n_) * dx_; }

  double dp() const noexcept;
  double p_min() const noexcept { return -kPi * hbar_ / dx_; }
  double p(std::size_t j) const noexcept;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::size_t n_;
  double x_min_;
  double dx_;
  double hbar_;
};

/// Phase-space shift (delta_x, delta_p).
struct Displacement {
  double delta_x = 0.0;
  double delta_p = 0.0;

  Displacement operator-() const { return {-delta_x, -delta_p}; }
  friend Displacement operator-(Displacement a, Displacement b) {
    return {a.delta_x - b.delta_x, a.delta_p - b.delta_p};
  }
  friend Displacement operator+(Displacement a, Displacement b) {
    return {a.delta_x + b.delta_x, a.delta_p + b.delta_p};
  }
  friend Displacement operator*(double s, Displacement d) { return {s * d.delta_x, s * d.delta_p}; }
  friend bool operator==(const Displacement&, const Displacement&) = default;

  /// Dimensionless size sqrt((dx*P)^2 + (dp*L)^2)/sqrt(L*P) relative to a
  /// reference support L x P.
  double magnitude(double length_ref, double momentum_ref) const;
};

/// Complex amplitudes psi(x_i) on a GridSpec. Immutable once built.
class WaveFunction {
 public:
  /// Throws DomainError on size mismatch or non-finite amplitudes.
  WaveFunction(GridSpec grid, std::vector<cplx> amp);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const cplx> amplitudes() const noexcept { return amp_; }
  const cplx& operator[](std::size_t i) const noexcept { return amp_[i]; }
  std::size_t size() const noexcept { return amp_.size(); }

  /// sum |psi|^2 dx
  double norm_squared() const noexcept;
  /// Copy scaled to unit norm. Throws DomainError for the zero vector.
  WaveFunction normalized() const;

 private:
  GridSpec grid_;
  std::vector<cplx> amp_;
};

/// rho(x_i, x_j), row-major n x n. Validated on construction.
class DensityMatrix {
 public:
  /// Checks Hermiticity (1e-10), unit trace (1e-8) and a non-negative
  /// diagonal (-1e-10); throws DomainError otherwise.
  DensityMatrix(GridSpec grid, std::vector<cplx> rho);

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t n() const noexcept { return grid_.n(); }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return rho_[i * grid_.n() + j]; }
  std::span<const cplx> data() const noexcept { return rho_; }

  /// Tr(rho) with the dx measure.
  double trace() const noexcept;
  /// Tr(rho^2) with the dx^2 measure.
  double purity() const noexcept;

 private:
  GridSpec grid_;
  std::vector<cplx> rho_;
};

/// Weighted pure state used to assemble a mixture.
struct MixtureComponent {
  double weight;
  WaveFunction psi;
};

/// sum conj(a_i) b_i dx. Throws ShapeError if the grids differ.
cplx inner(const WaveFunction& a, const WaveFunction& b);

/// Result of a displacement together with a wraparound warning.
struct Displaced {
  WaveFunction psi;
  /// |delta_x| was at least half the grid extent, so the periodic image
  /// of the state contributed.
  bool wrapped = false;
};

/// Weyl-ordered displacement
///   psi'(x) = exp(i dp (x - dx/2)/hbar) psi(x - dx).
/// The position shift is applied spectrally, so non-lattice shifts are exact
/// for band-limited states.
Displaced displace_flagged(const WaveFunction& psi, Displacement d);

WaveFunction displace(const WaveFunction& psi, Displacement d);

/// rho = sum_k w_k |psi_k><psi_k|. Weights must be >= 0 and sum to 1 (1e-10).
DensityMatrix build_density(std::span<const MixtureComponent> components);

DensityMatrix pure_density(const WaveFunction& psi);

/// Unitary transform to the centred momentum grid:
///   phi(p_j) = dx/sqrt(2 pi hbar) sum_i psi(x_i) exp(-i p_j x_i / hbar)
/// so that sum |phi|^2 dp = sum |psi|^2 dx.
std::vector<cplx> to_momentum(const WaveFunction& psi);

/// Inverse of to_momentum.
WaveFunction from_momentum(const GridSpec& grid, std::span<const cplx> phi);

/// First and second moments of a state in one representation.
struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double stddev() const;
};

Moments position_moments(const WaveFunction& psi);
Moments momentum_moments(const WaveFunction& psi);
Moments position_moments(const DensityMatrix& rho);
Moments momentum_moments(const DensityMatrix& rho);

/// |<a|b>| when both are normalised.
double fidelity(const WaveFunction& a, const WaveFunction& b);

}  // namespace subplanck
