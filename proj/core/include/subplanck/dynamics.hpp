#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "subplanck/grid.hpp"

namespace subplanck {

/// H = p^2/(2m) - kappa cos(x - l sin t) + a_h x^2/2.
struct DrivenPendulumParams {
  double mass = 1.0;
  double kappa = 0.36;
  double drive_amplitude = 3.0;  ///< l
  double harmonic = 0.01;        ///< a_h

  void validate() const;

  double potential(double x, double t) const;
  /// dV/dx
  double force_gradient(double x, double t) const;
  /// d^2V/dx^2
  double curvature(double x, double t) const;
  /// d^3V/dx^3
  double third_derivative(double x, double t) const;
};

/// Parameters of the chaotic system shown in the driven-pendulum figure.
inline constexpr DrivenPendulumParams kChaoticPendulum{1.0, 0.36, 3.0, 0.01};

/// Default integration step: 1/2048 of the 2 pi drive period.
inline constexpr double kDefaultDt = 2.0 * 3.14159265358979323846 / 2048.0;

struct Snapshot {
  double t;
  WaveFunction psi;
};

/// Strang split-operator propagation from t0 to t_final, recording the state
/// at every requested snapshot time (t0 itself included if requested).
///
/// Each step applies exp(-i p^2 dt/(4 m hbar)), exp(-i V(x, t+dt/2) dt/hbar),
/// exp(-i p^2 dt/(4 m hbar)). Every interval between consecutive stops is
/// covered by ceil(interval/|dt|) equal steps, so the step actually used
/// never exceeds |dt|. A negative dt with t_final < t0 runs backwards.
/// Throws NumericError if the state stops being finite.
std::vector<Snapshot> evolve_quantum(const WaveFunction& psi0, const DrivenPendulumParams& params, double dt,
                                     double t_final, std::span<const double> snapshots, double t0 = 0.0);

/// State at t_final only.
WaveFunction evolve_quantum_to(const WaveFunction& psi0, const DrivenPendulumParams& params, double dt,
                               double t_final, double t0 = 0.0);

struct PhasePoint {
  double x = 0.0;
  double p = 0.0;
};

/// 2x2 tangent map [[dx/dx0, dx/dp0], [dp/dx0, dp/dp0]].
struct TangentMap {
  double xx = 1.0, xp = 0.0, px = 0.0, pp = 1.0;
  double det() const { return xx * pp - xp * px; }
  /// Largest singular value.
  double stretch() const;
};

/// Uniformly weighted particles, each carrying its accumulated tangent map.
struct ClassicalEnsemble {
  std::vector<PhasePoint> particles;
  std::vector<TangentMap> tangents;
  double t = 0.0;

  /// Gaussian patch with independent spreads in x and p.
  static ClassicalEnsemble gaussian(PhasePoint center, double sigma_x, double sigma_p, std::size_t count,
                                    std::uint64_t seed);
};

/// Kick-drift-kick leapfrog; the force is evaluated at the start and end
/// time of each step. Each tangent map is advanced with the linearised step,
/// so its determinant stays 1 to rounding. Throws NumericError on blowup.
ClassicalEnsemble evolve_classical(const ClassicalEnsemble& ens, const DrivenPendulumParams& params, double dt,
                                   double t_final);

/// Smallest transverse structure of a stretched patch of initial size delta.
/// Each particle's filament neighbours are taken in the infinitesimal limit
/// through its tangent map: transverse width = delta / stretch.
struct FilamentScale {
  double p10 = 0.0;     ///< 10th percentile over particles
  double median = 0.0;
};

FilamentScale filament_scale(const ClassicalEnsemble& ens, double delta);

struct LyapunovEstimate {
  double rate = 0.0;
  bool chaotic = false;  ///< rate above kChaosThreshold
};

inline constexpr double kChaosThreshold = 0.02;

/// Largest Lyapunov exponent from the tangent map of one trajectory,
/// renormalised every `renorm_interval`.
LyapunovEstimate lyapunov(const DrivenPendulumParams& params, PhasePoint seed, double t_total,
                          double renorm_interval, double dt = 2.0 * 3.14159265358979323846 / 256.0, double t0 = 0.0);

struct LyapunovSummary {
  double mean = 0.0;        ///< over chaotic seeds
  double std_error = 0.0;   ///< standard error of that mean
  std::size_t chaotic_seeds = 0;
  std::vector<LyapunovEstimate> per_seed;
};

LyapunovSummary lyapunov_over_seeds(const DrivenPendulumParams& params, std::span<const PhasePoint> seeds,
                                    double t_total, double renorm_interval,
                                    double dt = 2.0 * 3.14159265358979323846 / 256.0);

/// Saturation times; a time is absent when its logarithm is not positive,
/// meaning the scales are already below hbar.
struct Timescales {
  std::optional<double> t_hbar;
  std::optional<double> t_r;
  double chi = 1.0;
};

/// chi = sqrt(|V'/V'''|) for the cosine part of the potential (the harmonic
/// term has V''' = 0 and drops out); equal to 1 for any kappa > 0.
double nonlinearity_scale(const DrivenPendulumParams& params);

/// t_hbar = ln(delta_p chi/hbar)/lyapunov, t_r = ln(A/hbar)/lyapunov.
Timescales saturation_times(double lyapunov_rate, std::optional<double> delta_p, double chi,
                            std::optional<double> action, double hbar);

Timescales timescales(double lyapunov_rate, double delta_p, const DrivenPendulumParams& params, double action,
                      double hbar);

}  // namespace subplanck
