#include "subplanck/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fft.hpp"
#include "spectral.hpp"
#include "subplanck/error.hpp"

namespace subplanck {

namespace detail {

double bin_momentum(const GridSpec& grid, std::size_t k) {
  const auto n = static_cast<std::ptrdiff_t>(grid.n());
  auto signed_k = static_cast<std::ptrdiff_t>(k);
  if (signed_k >= n / 2) signed_k -= n;
  return static_cast<double>(signed_k) * grid.dp();
}

std::vector<cplx> forward_centered(const GridSpec& grid, std::span<const cplx> psi) {
  const std::size_t n = grid.n();
  std::vector<cplx> buf(psi.begin(), psi.end());
  for (std::size_t i = 1; i < n; i += 2) buf[i] = -buf[i];
  fft_inplace(buf, FftDirection::forward);
  const double scale = grid.dx() / std::sqrt(2.0 * kPi * grid.hbar());
  for (std::size_t j = 0; j < n; ++j) {
    const double phase = -grid.p(j) * grid.x_min() / grid.hbar();
    buf[j] *= scale * std::polar(1.0, phase);
  }
  return buf;
}

std::vector<cplx> inverse_centered(const GridSpec& grid, std::span<const cplx> phi) {
  const std::size_t n = grid.n();
  std::vector<cplx> buf(n);
  for (std::size_t j = 0; j < n; ++j) buf[j] = phi[j] * std::polar(1.0, grid.p(j) * grid.x_min() / grid.hbar());
  fft_inplace(buf, FftDirection::backward);
  const double scale = grid.dp() / std::sqrt(2.0 * kPi * grid.hbar());
  for (std::size_t i = 0; i < n; ++i) buf[i] *= (i % 2 == 0 ? scale : -scale);
  return buf;
}

std::vector<cplx> shift_spectral(const GridSpec& grid, std::span<const cplx> f, double shift, Nyquist mode) {
  const std::size_t n = grid.n();
  std::vector<cplx> buf(f.begin(), f.end());
  fft_inplace(buf, FftDirection::forward);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double phase = -bin_momentum(grid, k) * shift / grid.hbar();
    if (k == n / 2 && mode == Nyquist::symmetric) {
      buf[k] *= std::cos(phase) * inv_n;
    } else {
      buf[k] *= std::polar(inv_n, phase);
    }
  }
  fft_inplace(buf, FftDirection::backward);
  return buf;
}

}  // namespace detail

GridSpec::GridSpec(std::size_t n, double x_min, double dx, double hbar) : n_(n), x_min_(x_min), dx_(dx), hbar_(hbar) {
  if (n < 16 || !std::has_single_bit(n)) {
    throw DomainError("grid size must be a power of two >= 16, got " + std::to_string(n));
  }
  if (!(dx > 0.0) || !std::isfinite(dx)) throw DomainError("grid spacing dx must be positive");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be positive");
  if (!std::isfinite(x_min)) throw DomainError("x_min must be finite");
}

GridSpec GridSpec::centered(std::size_t n, double dx, double hbar) {
  return GridSpec(n, -0.5 * static_cast<double>(n) * dx, dx, hbar);
}

double GridSpec::dp() const noexcept { return 2.0 * kPi * hbar_ / (static_cast<double>(n_) * dx_); }

double GridSpec::p(std::size_t j) const noexcept {
  return (static_cast<double>(j) - 0.5 * static_cast<double>(n_)) * dp();
}

double Displacement::magnitude(double length_ref, double momentum_ref) const {
  const double a = delta_x * momentum_ref;
  const double b = delta_p * length_ref;
  return std::sqrt(a * a + b * b) / std::sqrt(length_ref * momentum_ref);
}

double Moments::stddev() const { return std::sqrt(std::max(variance, 0.0)); }

WaveFunction::WaveFunction(GridSpec grid, std::vector<cplx> amp) : grid_(grid), amp_(std::move(amp)) {
  if (amp_.size() != grid_.n()) {
    throw DomainError("wave function has " + std::to_string(amp_.size()) + " amplitudes for a grid of " +
                      std::to_string(grid_.n()));
  }
  for (const auto& a : amp_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw DomainError("non-finite amplitude");
  }
}

double WaveFunction::norm_squared() const noexcept {
  double s = 0.0;
  for (const auto& a : amp_) s += std::norm(a);
  return s * grid_.dx();
}

WaveFunction WaveFunction::normalized() const {
  const double ns = norm_squared();
  if (!(ns > 0.0)) throw DomainError("cannot normalise the zero state");
  const double scale = 1.0 / std::sqrt(ns);
  std::vector<cplx> out(amp_);
  for (auto& a : out) a *= scale;
  return WaveFunction(grid_, std::move(out));
}

DensityMatrix::DensityMatrix(GridSpec grid, std::vector<cplx> rho) : grid_(grid), rho_(std::move(rho)) {
  const std::size_t n = grid_.n();
  if (rho_.size() != n * n) throw DomainError("density matrix size does not match grid");
  double scale = 1.0;
  for (const auto& v : rho_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("non-finite density matrix entry");
    scale = std::max(scale, std::abs(v));
  }
  const double herm_tol = 1e-10 * scale;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > herm_tol) {
        std::ostringstream msg;
        msg << "density matrix is not Hermitian at (" << i << ", " << j << ")";
        throw DomainError(msg.str());
      }
    }
    if ((*this)(i, i).real() < -herm_tol) throw DomainError("density matrix has a negative diagonal entry");
  }
  if (std::abs(trace() - 1.0) > 1e-8) {
    throw DomainError("density matrix trace is " + std::to_string(trace()) + ", expected 1");
  }
}

double DensityMatrix::trace() const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < n(); ++i) s += (*this)(i, i).real();
  return s * grid_.dx();
}

double DensityMatrix::purity() const noexcept {
  double s = 0.0;
  for (const auto& v : rho_) s += std::norm(v);
  return s * grid_.dx() * grid_.dx();
}

cplx inner(const WaveFunction& a, const WaveFunction& b) {
  if (!(a.grid() == b.grid())) throw ShapeError("inner product of states on different grids");
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s * a.grid().dx();
}

Displaced displace_flagged(const WaveFunction& psi, Displacement d) {
  const GridSpec& g = psi.grid();
  if (!std::isfinite(d.delta_x) || !std::isfinite(d.delta_p)) throw DomainError("non-finite displacement");
  const bool wrapped = std::abs(d.delta_x) >= 0.5 * g.extent();

  std::vector<cplx> out;
  if (d.delta_x != 0.0) {
    out = detail::shift_spectral(g, psi.amplitudes(), d.delta_x);
  } else {
    out.assign(psi.amplitudes().begin(), psi.amplitudes().end());
  }
  if (d.delta_p != 0.0) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] *= std::polar(1.0, d.delta_p * (g.x(i) - 0.5 * d.delta_x) / g.hbar());
    }
  }
  return {WaveFunction(g, std::move(out)), wrapped};
}

WaveFunction displace(const WaveFunction& psi, Displacement d) { return displace_flagged(psi, d).psi; }

DensityMatrix build_density(std::span<const MixtureComponent> components) {
  if (components.empty()) throw DomainError("mixture needs at least one component");
  const GridSpec grid = components.front().psi.grid();
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight >= 0.0)) throw DomainError("mixture weights must be non-negative");
    if (!(c.psi.grid() == grid)) throw ShapeError("mixture components live on different grids");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-10) throw DomainError("mixture weights sum to " + std::to_string(total));

  const std::size_t n = grid.n();
  std::vector<cplx> rho(n * n, cplx{0.0, 0.0});
  for (const auto& c : components) {
    for (std::size_t i = 0; i < n; ++i) {
      const cplx wi = c.weight * c.psi[i];
      cplx* row = rho.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) row[j] += wi * std::conj(c.psi[j]);
    }
  }
  return DensityMatrix(grid, std::move(rho));
}

DensityMatrix pure_density(const WaveFunction& psi) {
  const MixtureComponent one{1.0, psi};
  return build_density(std::span(&one, 1));
}

std::vector<cplx> to_momentum(const WaveFunction& psi) { return detail::forward_centered(psi.grid(), psi.amplitudes()); }

WaveFunction from_momentum(const GridSpec& grid, std::span<const cplx> phi) {
  if (phi.size() != grid.n()) throw ShapeError("momentum amplitudes do not match grid");
  return WaveFunction(grid, detail::inverse_centered(grid, phi));
}

namespace {

Moments moments_of(std::span<const double> weight, const auto& coord, double measure) {
  double w0 = 0.0, w1 = 0.0;
  for (std::size_t i = 0; i < weight.size(); ++i) {
    w0 += weight[i];
    w1 += weight[i] * coord(i);
  }
  w0 *= measure;
  w1 *= measure;
  if (!(w0 > 0.0)) throw DomainError("moments of a zero state");
  const double mean = w1 / w0;
  double w2 = 0.0;
  for (std::size_t i = 0; i < weight.size(); ++i) {
    const double c = coord(i) - mean;
    w2 += weight[i] * c * c;
  }
  return {mean, w2 * measure / w0};
}

}  // namespace

Moments position_moments(const WaveFunction& psi) {
  std::vector<double> w(psi.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::norm(psi[i]);
  const GridSpec& g = psi.grid();
  return moments_of(w, [&](std::size_t i) { return g.x(i); }, g.dx());
}

Moments momentum_moments(const WaveFunction& psi) {
  const auto phi = to_momentum(psi);
  std::vector<double> w(phi.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::norm(phi[j]);
  const GridSpec& g = psi.grid();
  return moments_of(w, [&](std::size_t j) { return g.p(j); }, g.dp());
}

Moments position_moments(const DensityMatrix& rho) {
  std::vector<double> w(rho.n());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = rho(i, i).real();
  const GridSpec& g = rho.grid();
  return moments_of(w, [&](std::size_t i) { return g.x(i); }, g.dx());
}

Moments momentum_moments(const DensityMatrix& rho) {
  // diag(F rho F^dagger): transform every column, then each row once more.
  const GridSpec& g = rho.grid();
  const std::size_t n = g.n();
  std::vector<cplx> t(n * n);
  std::vector<cplx> col(n);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t a = 0; a < n; ++a) col[a] = rho(a, b);
    const auto tc = detail::forward_centered(g, col);
    for (std::size_t j = 0; j < n; ++j) t[j * n + b] = tc[j];
  }
  std::vector<double> w(n);
  std::vector<cplx> row(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t b = 0; b < n; ++b) row[b] = std::conj(t[j * n + b]);
    const auto tr = detail::forward_centered(g, row);
    w[j] = tr[j].real();
  }
  return moments_of(w, [&](std::size_t j) { return g.p(j); }, g.dp());
}

double fidelity(const WaveFunction& a, const WaveFunction& b) { return std::abs(inner(a, b)); }

}  // namespace subplanck
