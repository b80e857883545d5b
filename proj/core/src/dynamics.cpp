#include "subplanck/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"
#include "rng.hpp"
#include "spectral.hpp"
#include "subplanck/error.hpp"
#include "subplanck/parallel.hpp"

namespace subplanck {

void DrivenPendulumParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("mass must be positive");
  if (!std::isfinite(kappa) || !std::isfinite(drive_amplitude) || !std::isfinite(harmonic)) {
    throw DomainError("pendulum parameters must be finite");
  }
}

double DrivenPendulumParams::potential(double x, double t) const {
  return -kappa * std::cos(x - drive_amplitude * std::sin(t)) + 0.5 * harmonic * x * x;
}

double DrivenPendulumParams::force_gradient(double x, double t) const {
  return kappa * std::sin(x - drive_amplitude * std::sin(t)) + harmonic * x;
}

double DrivenPendulumParams::curvature(double x, double t) const {
  return kappa * std::cos(x - drive_amplitude * std::sin(t)) + harmonic;
}

double DrivenPendulumParams::third_derivative(double x, double t) const {
  return -kappa * std::sin(x - drive_amplitude * std::sin(t));
}

namespace {

class SplitStepper {
 public:
  SplitStepper(const GridSpec& g, const DrivenPendulumParams& params) : g_(g), params_(params) {}

  void set_step(double dt) {
    if (dt == dt_) return;
    dt_ = dt;
    const std::size_t n = g_.n();
    kinetic_.resize(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double p = detail::bin_momentum(g_, k);
      kinetic_[k] = std::polar(inv_n, -p * p * dt / (4.0 * params_.mass * g_.hbar()));
    }
  }

  // Advances from t to t + dt_; returns sum |psi|^2 for the finiteness check.
  double step(std::vector<cplx>& psi, double t) {
    half_kinetic(psi);
    const double tm = t + 0.5 * dt_;
    for (std::size_t i = 0; i < psi.size(); ++i) {
      psi[i] *= std::polar(1.0, -params_.potential(g_.x(i), tm) * dt_ / g_.hbar());
    }
    half_kinetic(psi);
    double s = 0.0;
    for (const auto& v : psi) s += std::norm(v);
    return s;
  }

 private:
  void half_kinetic(std::vector<cplx>& psi) {
    detail::fft_inplace(psi, detail::FftDirection::forward);
    for (std::size_t k = 0; k < psi.size(); ++k) psi[k] *= kinetic_[k];
    detail::fft_inplace(psi, detail::FftDirection::backward);
  }

  GridSpec g_;
  DrivenPendulumParams params_;
  std::vector<cplx> kinetic_;
  double dt_ = 0.0;
};

// Number of equal steps covering `interval` without exceeding |dt|.
std::size_t step_count(double interval, double dt) {
  const double ratio = std::abs(interval / dt);
  return static_cast<std::size_t>(std::max(1.0, std::ceil(ratio - 1e-9)));
}

void check_direction(double dt, double t0, double t_final) {
  if (!(dt != 0.0) || !std::isfinite(dt)) throw DomainError("time step must be finite and non-zero");
  if (!std::isfinite(t0) || !std::isfinite(t_final)) throw DomainError("times must be finite");
  if (t_final != t0 && ((t_final > t0) != (dt > 0.0))) {
    throw DomainError("time step sign does not match the direction from t0 to t_final");
  }
}

}  // namespace

std::vector<Snapshot> evolve_quantum(const WaveFunction& psi0, const DrivenPendulumParams& params, double dt,
                                     double t_final, std::span<const double> snapshots, double t0) {
  params.validate();
  check_direction(dt, t0, t_final);
  const bool forward = t_final >= t0;
  std::vector<double> stops(snapshots.begin(), snapshots.end());
  for (double s : stops) {
    const bool inside = forward ? (s >= t0 && s <= t_final) : (s <= t0 && s >= t_final);
    if (!std::isfinite(s) || !inside) {
      std::ostringstream msg;
      msg << "snapshot time " << s << " lies outside [" << std::min(t0, t_final) << ", " << std::max(t0, t_final)
          << "]";
      throw DomainError(msg.str());
    }
  }
  if (forward) {
    std::sort(stops.begin(), stops.end());
  } else {
    std::sort(stops.begin(), stops.end(), std::greater<>());
  }
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  const GridSpec& g = psi0.grid();
  SplitStepper stepper(g, params);
  std::vector<cplx> psi(psi0.amplitudes().begin(), psi0.amplitudes().end());
  std::vector<Snapshot> out;
  out.reserve(stops.size());
  double t = t0;
  std::size_t steps_done = 0;

  auto advance_to = [&](double target) {
    if (target == t) return;
    const std::size_t count = step_count(target - t, dt);
    const double h = (target - t) / static_cast<double>(count);
    stepper.set_step(h);
    const double start = t;
    for (std::size_t k = 0; k < count; ++k) {
      const double norm = stepper.step(psi, start + static_cast<double>(k) * h);
      ++steps_done;
      if (!std::isfinite(norm)) throw NumericError("wave function became non-finite", steps_done);
    }
    t = target;
  };

  for (double s : stops) {
    advance_to(s);
    out.push_back({s, WaveFunction(g, psi)});
  }
  return out;
}

WaveFunction evolve_quantum_to(const WaveFunction& psi0, const DrivenPendulumParams& params, double dt,
                               double t_final, double t0) {
  const double stop[] = {t_final};
  return std::move(evolve_quantum(psi0, params, dt, t_final, stop, t0).back().psi);
}

double TangentMap::stretch() const {
  const double s = xx * xx + xp * xp + px * px + pp * pp;
  const double d = det();
  const double disc = std::max(0.0, s * s - 4.0 * d * d);
  return std::sqrt(0.5 * (s + std::sqrt(disc)));
}

ClassicalEnsemble ClassicalEnsemble::gaussian(PhasePoint center, double sigma_x, double sigma_p, std::size_t count,
                                              std::uint64_t seed) {
  if (count == 0) throw DomainError("ensemble needs at least one particle");
  if (!(sigma_x >= 0.0) || !(sigma_p >= 0.0)) throw DomainError("ensemble spreads must be non-negative");
  detail::SplitMix rng(seed);
  ClassicalEnsemble e;
  e.particles.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double x = center.x + sigma_x * rng.normal();
    const double p = center.p + sigma_p * rng.normal();
    e.particles.push_back({x, p});
  }
  e.tangents.assign(count, TangentMap{});
  return e;
}

namespace {

// One kick-drift-kick step of a particle and its tangent map.
inline void kdk(const DrivenPendulumParams& prm, PhasePoint& z, TangentMap& m, double t, double dt) {
  const double h = 0.5 * dt;
  double c = prm.curvature(z.x, t);
  z.p -= h * prm.force_gradient(z.x, t);
  m.px -= h * c * m.xx;
  m.pp -= h * c * m.xp;

  const double q = dt / prm.mass;
  z.x += q * z.p;
  m.xx += q * m.px;
  m.xp += q * m.pp;

  c = prm.curvature(z.x, t + dt);
  z.p -= h * prm.force_gradient(z.x, t + dt);
  m.px -= h * c * m.xx;
  m.pp -= h * c * m.xp;
}

}  // namespace

ClassicalEnsemble evolve_classical(const ClassicalEnsemble& ens, const DrivenPendulumParams& params, double dt,
                                   double t_final) {
  params.validate();
  check_direction(dt, ens.t, t_final);
  if (ens.tangents.size() != ens.particles.size()) throw ShapeError("ensemble tangents do not match particles");
  ClassicalEnsemble out = ens;
  if (t_final == ens.t) return out;
  const std::size_t count = step_count(t_final - ens.t, dt);
  const double h = (t_final - ens.t) / static_cast<double>(count);
  const double t0 = ens.t;
  std::vector<std::size_t> blown(out.particles.size(), 0);
  parallel_for(0, out.particles.size(), [&](std::size_t k) {
    PhasePoint z = out.particles[k];
    TangentMap m = out.tangents[k];
    for (std::size_t s = 0; s < count; ++s) {
      kdk(params, z, m, t0 + static_cast<double>(s) * h, h);
      if (!std::isfinite(z.x) || !std::isfinite(z.p)) {
        blown[k] = s + 1;
        break;
      }
    }
    out.particles[k] = z;
    out.tangents[k] = m;
  });
  for (std::size_t k = 0; k < blown.size(); ++k) {
    if (blown[k] != 0) throw NumericError("trajectory " + std::to_string(k) + " became non-finite", blown[k]);
  }
  out.t = t_final;
  return out;
}

FilamentScale filament_scale(const ClassicalEnsemble& ens, double delta) {
  if (ens.tangents.empty()) throw DomainError("filament scale of an empty ensemble");
  if (!(delta > 0.0)) throw DomainError("initial patch size must be positive");
  std::vector<double> width;
  width.reserve(ens.tangents.size());
  for (const auto& m : ens.tangents) width.push_back(delta / m.stretch());
  std::sort(width.begin(), width.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(width.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, width.size() - 1);
    const double f = pos - static_cast<double>(lo);
    return width[lo] * (1.0 - f) + width[hi] * f;
  };
  return {quantile(0.1), quantile(0.5)};
}

LyapunovEstimate lyapunov(const DrivenPendulumParams& params, PhasePoint seed, double t_total, double renorm_interval,
                          double dt, double t0) {
  params.validate();
  if (!(t_total > 0.0)) throw DomainError("Lyapunov integration time must be positive");
  if (!(renorm_interval > 0.0) || !(dt > 0.0)) throw DomainError("Lyapunov steps must be positive");
  const std::size_t per_block = step_count(renorm_interval, dt);
  const std::size_t blocks = step_count(t_total, renorm_interval);
  const double h = renorm_interval / static_cast<double>(per_block);
  PhasePoint z = seed;
  double log_sum = 0.0;
  double t = t0;
  std::size_t steps = 0;
  // The tangent vector rides in the first column of the map.
  double vx = 1.0, vp = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    TangentMap m;
    m.xx = vx;
    m.px = vp;
    for (std::size_t s = 0; s < per_block; ++s) {
      kdk(params, z, m, t, h);
      t += h;
      ++steps;
    }
    const double grow = std::hypot(m.xx, m.px);
    if (!std::isfinite(grow) || !std::isfinite(z.x)) throw NumericError("Lyapunov trajectory diverged", steps);
    log_sum += std::log(grow);
    vx = m.xx / grow;
    vp = m.px / grow;
  }
  LyapunovEstimate e;
  e.rate = log_sum / (t - t0);
  e.chaotic = e.rate > kChaosThreshold;
  return e;
}

LyapunovSummary lyapunov_over_seeds(const DrivenPendulumParams& params, std::span<const PhasePoint> seeds,
                                    double t_total, double renorm_interval, double dt) {
  if (seeds.empty()) throw DomainError("Lyapunov summary needs at least one seed");
  LyapunovSummary out;
  out.per_seed.resize(seeds.size());
  parallel_for(0, seeds.size(),
               [&](std::size_t k) { out.per_seed[k] = lyapunov(params, seeds[k], t_total, renorm_interval, dt); });
  std::vector<double> rates;
  for (const auto& e : out.per_seed) {
    if (e.chaotic) rates.push_back(e.rate);
  }
  out.chaotic_seeds = rates.size();
  if (rates.empty()) return out;
  double mean = 0.0;
  for (double r : rates) mean += r;
  mean /= static_cast<double>(rates.size());
  double var = 0.0;
  for (double r : rates) var += (r - mean) * (r - mean);
  out.mean = mean;
  if (rates.size() > 1) {
    var /= static_cast<double>(rates.size() - 1);
    out.std_error = std::sqrt(var / static_cast<double>(rates.size()));
  }
  return out;
}

double nonlinearity_scale(const DrivenPendulumParams& params) {
  if (!(params.kappa != 0.0)) throw DomainError("nonlinearity scale is undefined without the cosine potential");
  // |V'/V'''| = |kappa sin| / |kappa sin| = 1 wherever the ratio is defined.
  return 1.0;
}

Timescales saturation_times(double lyapunov_rate, std::optional<double> delta_p, double chi,
                            std::optional<double> action, double hbar) {
  if (!(lyapunov_rate > 0.0)) throw DomainError("saturation times need a positive Lyapunov exponent");
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  Timescales ts;
  ts.chi = chi;
  if (delta_p) {
    const double arg = *delta_p * chi / hbar;
    if (arg > 1.0) ts.t_hbar = std::log(arg) / lyapunov_rate;
  }
  if (action) {
    const double arg = *action / hbar;
    if (arg > 1.0) ts.t_r = std::log(arg) / lyapunov_rate;
  }
  return ts;
}

Timescales timescales(double lyapunov_rate, double delta_p, const DrivenPendulumParams& params, double action,
                      double hbar) {
  return saturation_times(lyapunov_rate, delta_p, nonlinearity_scale(params), action, hbar);
}

}  // namespace subplanck
