#include "subplanck/decoherence.hpp"

#include <algorithm>
#include <cmath>

#include "subplanck/error.hpp"
#include "subplanck/parallel.hpp"

namespace subplanck {

namespace {

// Squared scaled size (dx/xi)^2 + (dp xi/hbar)^2 below which the packet
// envelope factor exp(-r^2/4) stays within a few percent of one.
constexpr double kSmallScaledShift2 = 0.1;

double scaled_shift2(Displacement d, double xi, double hbar) {
  const double u = d.delta_x / xi;
  const double v = d.delta_p * xi / hbar;
  return u * u + v * v;
}

Displacement unit(Displacement d) {
  const double len = std::hypot(d.delta_x, d.delta_p);
  if (!(len > 0.0) || !std::isfinite(len)) throw DomainError("scan direction must be finite and non-zero");
  return {d.delta_x / len, d.delta_p / len};
}

SmallShift small_shift_from_variance(double var, double delta_p, double hbar) {
  SmallShift s;
  s.value = 1.0 - delta_p * delta_p * var / (hbar * hbar);
  s.valid = std::abs(delta_p) * std::sqrt(var) / hbar < kSmallShiftWindow;
  return s;
}

double shift_from_variance(double var, double hbar) {
  if (!(var > 0.0)) throw DomainError("orthogonality shift needs a state with positive position variance");
  return hbar / std::sqrt(var);
}

}  // namespace

void TwoStateSystem::validate() const {
  const double n = std::norm(alpha) + std::norm(beta);
  if (std::abs(n - 1.0) > 1e-10) throw DomainError("system amplitudes are not normalised: |a|^2+|b|^2 = " + std::to_string(n));
}

std::pair<WaveFunction, WaveFunction> conditional_evolve(const WaveFunction& env, const ConditionalShifts& shifts) {
  return {displace(env, shifts.plus), displace(env, shifts.minus)};
}

cplx suppression_factor(const WaveFunction& eps_plus, const WaveFunction& eps_minus) {
  return inner(eps_minus, eps_plus);
}

cplx fourier_suppression(const WaveFunction& env, double delta_p) {
  const GridSpec& g = env.grid();
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < env.size(); ++i) s += std::norm(env[i]) * std::polar(1.0, delta_p * g.x(i) / g.hbar());
  return s * g.dx();
}

SmallShift small_shift_prediction(const WaveFunction& env, double delta_p) {
  return small_shift_from_variance(position_moments(env).variance, delta_p, env.grid().hbar());
}

SmallShift small_shift_prediction(const DensityMatrix& env, double delta_p) {
  return small_shift_from_variance(position_moments(env).variance, delta_p, env.grid().hbar());
}

double orthogonality_shift(const WaveFunction& env) {
  return shift_from_variance(position_moments(env).variance, env.grid().hbar());
}

double orthogonality_shift(const DensityMatrix& env) {
  return shift_from_variance(position_moments(env).variance, env.grid().hbar());
}

cplx mixed_suppression(const DensityMatrix& rho_env, const ConditionalShifts& shifts) {
  const GridSpec& g = rho_env.grid();
  const std::size_t n = g.n();

  // M = D+ rho, column by column.
  std::vector<cplx> m(n * n);
  parallel_for(0, n, [&](std::size_t j) {
    std::vector<cplx> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = rho_env(i, j);
    const auto out = displace(WaveFunction(g, std::move(col)), shifts.plus);
    for (std::size_t i = 0; i < n; ++i) m[i * n + j] = out[i];
  });

  // diag(D- M^dagger); column j of M^dagger is conj of row j of M.
  std::vector<cplx> diag(n);
  parallel_for(0, n, [&](std::size_t j) {
    std::vector<cplx> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = std::conj(m[j * n + i]);
    const auto out = displace(WaveFunction(g, std::move(col)), shifts.minus);
    diag[j] = out[j];
  });

  cplx tr{0.0, 0.0};
  for (const auto& d : diag) tr += d;
  return std::conj(tr * g.dx());
}

double SystemDensity::purity() const {
  double s = 0.0;
  for (const auto& v : m) s += std::norm(v);
  return s;
}

std::array<double, 2> SystemDensity::eigenvalues() const {
  const double a = m[0].real();
  const double d = m[3].real();
  const double mid = 0.5 * (a + d);
  const double r = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m[1]));
  return {mid - r, mid + r};
}

SystemDensity reduced_density(const TwoStateSystem& sys, cplx z) {
  sys.validate();
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 1.0 + 1e-9) {
    throw DomainError("suppression factor must satisfy |z| <= 1");
  }
  const cplx off = z * sys.alpha * std::conj(sys.beta);
  return {{cplx{std::norm(sys.alpha), 0.0}, off, std::conj(off), cplx{std::norm(sys.beta), 0.0}}};
}

Prediction compass_overlap_prediction(const CompassSpec& c, Displacement d, double hbar) {
  const double a = std::cos(d.delta_x * c.P / (2.0 * hbar));
  const double b = std::cos(d.delta_p * c.L / (2.0 * hbar));
  Prediction out;
  out.value = 0.25 * (a + b) * (a + b);
  out.valid = c.sparse(hbar) && scaled_shift2(d, c.xi, hbar) <= kSmallScaledShift2;
  return out;
}

Prediction sparse_overlap_prediction(const SparseSpec& spec, Displacement d, double hbar) {
  const auto w = spec.weights();
  cplx s{0.0, 0.0};
  for (std::size_t k = 0; k < w.size(); ++k) {
    const auto& pk = spec.packets[k];
    s += w[k] * std::polar(1.0, (d.delta_p * pk.x - d.delta_x * pk.p) / hbar);
  }
  Prediction out;
  out.value = std::abs(s);
  out.valid = spec.sparse(hbar) && scaled_shift2(d, spec.xi, hbar) <= kSmallScaledShift2;
  return out;
}

namespace {

template <typename Eval>
std::vector<OverlapSample> scan(Displacement direction, double max_magnitude, std::size_t steps, Eval eval) {
  if (steps < 16) throw DomainError("decay scan needs at least 16 steps");
  if (!(max_magnitude > 0.0) || !std::isfinite(max_magnitude)) throw DomainError("scan range must be positive");
  const Displacement u = unit(direction);
  std::vector<OverlapSample> out(steps + 1);
  parallel_for(0, steps + 1, [&](std::size_t k) {
    const double s = max_magnitude * static_cast<double>(k) / static_cast<double>(steps);
    const Displacement d = s * u;
    out[k] = {d.delta_x, d.delta_p, eval(d)};
  });
  return out;
}

}  // namespace

std::vector<OverlapSample> decay_scan(const WaveFunction& env, Displacement direction, double max_magnitude,
                                      std::size_t steps) {
  return scan(direction, max_magnitude, steps,
              [&](Displacement d) { return suppression_factor(displace(env, d), env); });
}

std::vector<OverlapSample> decay_scan(const DensityMatrix& env, Displacement direction, double max_magnitude,
                                      std::size_t steps) {
  return scan(direction, max_magnitude, steps,
              [&](Displacement d) { return mixed_suppression(env, {d, Displacement{}}); });
}

std::optional<double> first_crossing(const std::vector<OverlapSample>& curve, double threshold) {
  for (std::size_t k = 1; k < curve.size(); ++k) {
    const double a = std::abs(curve[k - 1].z);
    const double b = std::abs(curve[k].z);
    if (b <= threshold && a > threshold) {
      const double s0 = std::hypot(curve[k - 1].delta_x, curve[k - 1].delta_p);
      const double s1 = std::hypot(curve[k].delta_x, curve[k].delta_p);
      return s0 + (s1 - s0) * (a - threshold) / (a - b);
    }
  }
  return std::nullopt;
}

}  // namespace subplanck
