#pragma once

#include <array>
#include <utility>
#include <vector>

#include "subplanck/grid.hpp"
#include "subplanck/states.hpp"
#include "subplanck/wigner.hpp"

namespace subplanck {

/// System state alpha|+> + beta|->.
struct TwoStateSystem {
  cplx alpha;
  cplx beta;

  /// Throws DomainError unless |alpha|^2 + |beta|^2 = 1 within 1e-10.
  void validate() const;
};

/// Environment shifts conditioned on the system being in |+> or |->.
struct ConditionalShifts {
  Displacement plus;
  Displacement minus;

  Displacement net() const { return plus - minus; }

  /// Antisymmetric coupling g (|+><+| - |-><-|) p over time t: shifts +-(g t, 0).
  static ConditionalShifts from_coupling(double g, double t) { return {{g * t, 0.0}, {-g * t, 0.0}}; }
};

/// (displace(env, plus), displace(env, minus)).
std::pair<WaveFunction, WaveFunction> conditional_evolve(const WaveFunction& env, const ConditionalShifts& shifts);

/// z = <eps_minus|eps_plus>, the factor multiplying the |+><-| element of the
/// reduced system state. For shifts along p alone it equals
/// sum |eps|^2 exp(i delta_p x/hbar) dx with delta = plus - minus.
cplx suppression_factor(const WaveFunction& eps_plus, const WaveFunction& eps_minus);

/// sum |eps(x_i)|^2 exp(i delta_p x_i/hbar) dx
cplx fourier_suppression(const WaveFunction& env, double delta_p);

/// Second-order estimate of |z|^2 for a momentum shift.
struct SmallShift {
  double value = 1.0;   ///< 1 - delta_p^2 Var(x)/hbar^2
  bool valid = true;    ///< delta_p L/hbar < 0.3
};

inline constexpr double kSmallShiftWindow = 0.3;

SmallShift small_shift_prediction(const WaveFunction& env, double delta_p);
SmallShift small_shift_prediction(const DensityMatrix& env, double delta_p);

/// hbar / sqrt(Var x). Throws DomainError when Var x = 0.
double orthogonality_shift(const WaveFunction& env);
double orthogonality_shift(const DensityMatrix& env);

/// Conj(Tr(D- rho D+^dagger)) dx, the mixed-state form of suppression_factor.
/// D+ is applied to the columns of rho and D- to the columns of the adjoint
/// of the result.
cplx mixed_suppression(const DensityMatrix& rho_env, const ConditionalShifts& shifts);

/// 2x2 system density matrix, row-major.
struct SystemDensity {
  std::array<cplx, 4> m;

  double trace() const { return (m[0] + m[3]).real(); }
  double purity() const;
  /// Ascending eigenvalues.
  std::array<double, 2> eigenvalues() const;
};

/// [[|alpha|^2, z alpha beta*], [z* alpha* beta, |beta|^2]].
/// Throws DomainError for |z| > 1 + 1e-9.
SystemDensity reduced_density(const TwoStateSystem& sys, cplx z);

struct Prediction {
  double value = 0.0;
  bool valid = true;
};

/// Squared compass overlap (cos(dx P/2hbar) + cos(dp L/2hbar))^2/4, valid
/// for a sparse compass and shifts small against the packet size.
Prediction compass_overlap_prediction(const CompassSpec& c, Displacement d, double hbar);

/// |sum_k w_k exp(i phi_k)| with phi_k = (dp x_k - dx p_k)/hbar, the phase a
/// packet at (x_k, p_k) picks up under displace(., d).
Prediction sparse_overlap_prediction(const SparseSpec& spec, Displacement d, double hbar);

/// Overlap <psi|D(s u) psi> (or its mixed-state form) at steps+1 equally
/// spaced magnitudes s in [0, max_magnitude] along the unit direction u.
/// Requires steps >= 16.
std::vector<OverlapSample> decay_scan(const WaveFunction& env, Displacement direction, double max_magnitude,
                                      std::size_t steps);
std::vector<OverlapSample> decay_scan(const DensityMatrix& env, Displacement direction, double max_magnitude,
                                      std::size_t steps);

/// First |delta| at which |z| falls to the threshold, linearly interpolated
/// between scan samples; nullopt if the curve never gets there.
std::optional<double> first_crossing(const std::vector<OverlapSample>& curve, double threshold = kInvE);

}  // namespace subplanck
