#pragma once

#include <optional>
#include <span>
#include <vector>

#include "subplanck/grid.hpp"

namespace subplanck {

/// Real W(x_i, p_j) sampled on a rectangular phase-space lattice, stored
/// x-major (all momenta of x_0 first).
class WignerGrid {
 public:
  WignerGrid(double hbar, double x_min, double dx, std::size_t n_x, double p_min, double dp, std::size_t n_p,
             std::vector<double> values);

  double hbar() const noexcept { return hbar_; }
  double x_min() const noexcept { return x_min_; }
  double dx() const noexcept { return dx_; }
  std::size_t n_x() const noexcept { return n_x_; }
  double p_min() const noexcept { return p_min_; }
  double dp() const noexcept { return dp_; }
  std::size_t n_p() const noexcept { return n_p_; }

  double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * dx_; }
  double p(std::size_t j) const noexcept { return p_min_ + static_cast<double>(j) * dp_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * n_p_ + j]; }
  std::span<const double> values() const noexcept { return values_; }

  /// Axes (not values) agree exactly.
  bool same_axes(const WignerGrid& other) const noexcept;

  /// sum W dx dp
  double integral() const noexcept;

  /// W(x, .) at the row nearest x, and W(., p) at the column nearest p.
  std::vector<double> row_near(double x) const;
  std::vector<double> column_near(double p) const;

 private:
  double hbar_;
  double x_min_;
  double dx_;
  std::size_t n_x_;
  double p_min_;
  double dp_;
  std::size_t n_p_;
  std::vector<double> values_;
};

/// Restricts a Wigner evaluation to the grid rows and momentum columns that
/// fall inside the given ranges. An unset range keeps the full axis.
struct WignerWindow {
  std::optional<std::pair<double, double>> x_range;
  std::optional<std::pair<double, double>> p_range;
};

/// W(x,p) = 1/(2 pi hbar) int exp(i p y/hbar) psi*(x+y/2) psi(x-y/2) dy.
///
/// The chord y runs over one grid extent centred on zero with spacing dx;
/// odd multiples of dx/2 are taken from a spectrally interpolated half-step
/// copy of psi. The momentum axis is the conjugate grid of the state, so the
/// result is exact for band-limited states whose support spans less than
/// half the grid.
WignerGrid wigner_of_psi(const WaveFunction& psi, const WignerWindow& window = {});

/// Same transform along the anti-diagonal chord rho(x - y/2, x + y/2).
WignerGrid wigner_of_rho(const DensityMatrix& rho, const WignerWindow& window = {});

/// 2 pi hbar sum W1 W2 dx dp. Throws ShapeError if the axes differ.
double moyal_overlap(const WignerGrid& w1, const WignerGrid& w2);

/// Phase-space scales of a state, built from its spreads L (position) and
/// P (momentum).
struct StructureReport {
  double L = 0.0;
  double P = 0.0;
  double A = 0.0;             ///< L * P
  double a_sub = 0.0;         ///< hbar^2 / A
  double n_states = 0.0;      ///< A / (2 pi hbar)
  double delta_x_min = 0.0;   ///< hbar / P
  double delta_p_min = 0.0;   ///< hbar / L
  double tile_area = 0.0;     ///< (2 pi hbar)^2 / A
  std::optional<double> t_hbar;
  std::optional<double> t_r;
};

/// Optional dynamical inputs for the saturation times.
struct StructureOptions {
  std::optional<double> lyapunov;
  std::optional<double> delta_p0;
  double chi = 1.0;
};

/// Report from given spreads; used directly when L and P are geometric
/// separations rather than measured moments.
StructureReport structure_from_extent(double L, double P, double hbar, const StructureOptions& opts = {});

/// Report from the position and momentum standard deviations of the state.
/// Throws DomainError for a state with no spread on the grid.
StructureReport structure_report(const WaveFunction& psi, const StructureOptions& opts = {});
StructureReport structure_report(const DensityMatrix& rho, const StructureOptions& opts = {});

/// One point of an overlap-decay curve.
struct OverlapSample {
  double delta_x = 0.0;
  double delta_p = 0.0;
  cplx z;
};

struct CoherenceScale {
  double scale = 0.0;                 ///< |delta| at the threshold crossing
  std::vector<OverlapSample> curve;   ///< samples scanned up to the crossing
};

inline constexpr double kInvE = 0.36787944117144233;

/// Smallest |delta| along `direction` (normalised internally) with
/// |<psi|D(delta) psi>| <= threshold. Scans with a step of min(dx, dp)/4 and
/// refines the bracketing step by bisection.
/// Throws DomainError if no crossing occurs within half the grid.
CoherenceScale coherence_scale(const WaveFunction& psi, Displacement direction, double threshold = kInvE);

/// First local minimum of |<psi|D(s u) psi>| along the unit direction u for
/// s in (0, s_max], located on a quarter-cell scan and refined by golden
/// section. Touching zeros of the overlap (orthogonality) show up here even
/// when |z| never changes sign.
struct OverlapMinimum {
  double shift = 0.0;
  double overlap = 0.0;
};

std::optional<OverlapMinimum> first_overlap_minimum(const WaveFunction& psi, Displacement direction, double s_max);

enum class Axis { x, p };

/// Angular frequency of the highest-frequency significant spectral peak
/// (at least 1% of the spectral maximum, DC lobe excluded) of the slice along
/// `axis` at transverse coordinate `at`. For a cat with separation L the
/// ripple along p sits at L/hbar. Returns nullopt for slices without ripples.
std::optional<double> ripple_frequency(const WignerGrid& w, Axis axis, double at);

struct TileMeasurement {
  double cell_area = 0.0;   ///< area of the positive cell around the centre
  double tile_area = 0.0;   ///< periodic tile = one positive plus one negative cell
  std::vector<double> radii_x;  ///< boundary points found along each ray
  std::vector<double> radii_p;
};

/// Measures the checkerboard cell containing (x_c, p_c) by casting rays from
/// the centre and locating the first zero crossing (or touching zero) of the
/// bicubic interpolant of W along each ray.
TileMeasurement measure_central_tile(const WignerGrid& w, double x_c = 0.0, double p_c = 0.0,
                                     std::size_t rays = 720);

}  // namespace subplanck
