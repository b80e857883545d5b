#include "subplanck/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fft.hpp"
#include "spectral.hpp"
#include "subplanck/dynamics.hpp"
#include "subplanck/error.hpp"
#include "subplanck/parallel.hpp"

namespace subplanck {

WignerGrid::WignerGrid(double hbar, double x_min, double dx, std::size_t n_x, double p_min, double dp,
                       std::size_t n_p, std::vector<double> values)
    : hbar_(hbar), x_min_(x_min), dx_(dx), n_x_(n_x), p_min_(p_min), dp_(dp), n_p_(n_p), values_(std::move(values)) {
  if (n_x == 0 || n_p == 0) throw ShapeError("Wigner grid must have at least one row and one column");
  if (values_.size() != n_x * n_p) throw ShapeError("Wigner value count does not match n_x * n_p");
  if (!(dx > 0.0) || !(dp > 0.0) || !(hbar > 0.0)) throw DomainError("Wigner grid spacings and hbar must be positive");
}

bool WignerGrid::same_axes(const WignerGrid& o) const noexcept {
  return hbar_ == o.hbar_ && x_min_ == o.x_min_ && dx_ == o.dx_ && n_x_ == o.n_x_ && p_min_ == o.p_min_ &&
         dp_ == o.dp_ && n_p_ == o.n_p_;
}

double WignerGrid::integral() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * dx_ * dp_;
}

namespace {

std::size_t nearest_index(double v, double v_min, double step, std::size_t n) {
  const double k = std::round((v - v_min) / step);
  if (k <= 0.0) return 0;
  if (k >= static_cast<double>(n - 1)) return n - 1;
  return static_cast<std::size_t>(k);
}

// Indices [lo, hi) of an axis whose points fall inside the range.
std::pair<std::size_t, std::size_t> window_indices(const std::optional<std::pair<double, double>>& range,
                                                   double v_min, double step, std::size_t n) {
  if (!range) return {0, n};
  const auto [a, b] = *range;
  if (!(a <= b)) throw DomainError("window range must satisfy lo <= hi");
  const double eps = 1e-9 * step;
  const double first = std::ceil((a - v_min - eps) / step);
  const double last = std::floor((b - v_min + eps) / step);
  const double lo = std::max(first, 0.0);
  const double hi = std::min(last, static_cast<double>(n) - 1.0);
  if (hi < lo) throw DomainError("window does not overlap the grid");
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi) + 1};
}

// c(i, m) = rho(x_i - m dx/2, x_i + m dx/2) for integer m; the transform of
// the chord values over m gives row i of W.
template <typename Chord>
WignerGrid chord_transform(const GridSpec& g, const WignerWindow& window, Chord chord) {
  const std::size_t n = g.n();
  const auto [i0, i1] = window_indices(window.x_range, g.x_min(), g.dx(), n);
  const auto [j0, j1] = window_indices(window.p_range, g.p_min(), g.dp(), n);
  const std::size_t nx = i1 - i0;
  const std::size_t np = j1 - j0;
  std::vector<double> values(nx * np);
  const double scale = g.dx() / (2.0 * kPi * g.hbar());
  const long half = static_cast<long>(n / 2);
  const double nyq_sign = (half % 2 == 0) ? 1.0 : -1.0;

  parallel_for(i0, i1, [&](std::size_t i) {
    std::vector<cplx> buf(n);
    for (long m = -half; m < half; ++m) {
      const std::size_t slot = static_cast<std::size_t>((m + static_cast<long>(n)) % static_cast<long>(n));
      if (m == -half) {
        // The unpaired end of the chord; its partner at +n/2 is the complex
        // conjugate, so only the real part belongs to the symmetric sum.
        buf[slot] = nyq_sign * chord(i, m).real();
        continue;
      }
      const cplx c = chord(i, m);
      buf[slot] = (m % 2 == 0) ? c : -c;
    }
    detail::fft_inplace(buf, detail::FftDirection::backward);
    double* row = values.data() + (i - i0) * np;
    for (std::size_t j = j0; j < j1; ++j) row[j - j0] = scale * buf[j].real();
  });

  return WignerGrid(g.hbar(), g.x(i0), g.dx(), nx, g.p_min() + static_cast<double>(j0) * g.dp(), g.dp(), np,
                    std::move(values));
}

std::size_t wrap(long k, std::size_t n) {
  const long nn = static_cast<long>(n);
  return static_cast<std::size_t>(((k % nn) + nn) % nn);
}

}  // namespace

std::vector<double> WignerGrid::row_near(double x) const {
  const std::size_t i = nearest_index(x, x_min_, dx_, n_x_);
  return {values_.begin() + static_cast<std::ptrdiff_t>(i * n_p_),
          values_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_p_)};
}

std::vector<double> WignerGrid::column_near(double p) const {
  const std::size_t j = nearest_index(p, p_min_, dp_, n_p_);
  std::vector<double> col(n_x_);
  for (std::size_t i = 0; i < n_x_; ++i) col[i] = (*this)(i, j);
  return col;
}

WignerGrid wigner_of_psi(const WaveFunction& psi, const WignerWindow& window) {
  const GridSpec& g = psi.grid();
  const std::size_t n = g.n();
  // psi2[2i] = psi(x_i), psi2[2i+1] = psi(x_i + dx/2)
  const auto half_step = detail::shift_spectral(g, psi.amplitudes(), -0.5 * g.dx(), detail::Nyquist::symmetric);
  std::vector<cplx> psi2(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    psi2[2 * i] = psi[i];
    psi2[2 * i + 1] = half_step[i];
  }
  return chord_transform(g, window, [&](std::size_t i, long m) {
    const long c = 2 * static_cast<long>(i);
    return psi2[wrap(c - m, 2 * n)] * std::conj(psi2[wrap(c + m, 2 * n)]);
  });
}

WignerGrid wigner_of_rho(const DensityMatrix& rho, const WignerWindow& window) {
  const GridSpec& g = rho.grid();
  const std::size_t n = g.n();
  // rho_half(a, b) = rho(x_a + dx/2, x_b + dx/2), shifted along both indices.
  std::vector<cplx> rho_half(n * n);
  parallel_for(0, n, [&](std::size_t a) {
    const auto row = detail::shift_spectral(g, std::span<const cplx>(rho.data().data() + a * n, n), -0.5 * g.dx(),
                                            detail::Nyquist::symmetric);
    std::copy(row.begin(), row.end(), rho_half.begin() + static_cast<std::ptrdiff_t>(a * n));
  });
  parallel_for(0, n, [&](std::size_t b) {
    std::vector<cplx> col(n);
    for (std::size_t a = 0; a < n; ++a) col[a] = rho_half[a * n + b];
    const auto shifted = detail::shift_spectral(g, col, -0.5 * g.dx(), detail::Nyquist::symmetric);
    for (std::size_t a = 0; a < n; ++a) rho_half[a * n + b] = shifted[a];
  });

  return chord_transform(g, window, [&](std::size_t i, long m) -> cplx {
    const long c = 2 * static_cast<long>(i);
    const long lo = c - m;
    const long hi = c + m;
    if (m % 2 == 0) return rho(wrap(lo / 2, n), wrap(hi / 2, n));
    // Odd chords land on the half-step lattice: 2a + 1 = lo.
    return rho_half[wrap((lo - 1) / 2, n) * n + wrap((hi - 1) / 2, n)];
  });
}

double moyal_overlap(const WignerGrid& w1, const WignerGrid& w2) {
  if (!w1.same_axes(w2)) throw ShapeError("Moyal overlap needs Wigner functions on identical axes");
  double s = 0.0;
  const auto a = w1.values();
  const auto b = w2.values();
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return 2.0 * kPi * w1.hbar() * s * w1.dx() * w1.dp();
}

StructureReport structure_from_extent(double L, double P, double hbar, const StructureOptions& opts) {
  if (!(L > 0.0) || !(P > 0.0)) throw DomainError("structure scales need positive L and P");
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  StructureReport r;
  r.L = L;
  r.P = P;
  r.A = L * P;
  r.a_sub = hbar * hbar / r.A;
  r.n_states = r.A / (2.0 * kPi * hbar);
  r.delta_x_min = hbar / P;
  r.delta_p_min = hbar / L;
  r.tile_area = 4.0 * kPi * kPi * hbar * hbar / r.A;
  if (opts.lyapunov) {
    const auto ts = saturation_times(*opts.lyapunov, opts.delta_p0, opts.chi, r.A, hbar);
    r.t_hbar = ts.t_hbar;
    r.t_r = ts.t_r;
  }
  return r;
}

namespace {

StructureReport from_moments(const GridSpec& g, Moments mx, Moments mp, const StructureOptions& opts) {
  const double L = mx.stddev();
  const double P = mp.stddev();
  if (L < 0.1 * g.dx() || P < 0.1 * g.dp()) {
    std::ostringstream msg;
    msg << "state has no resolvable spread on the grid (L=" << L << ", P=" << P << ")";
    throw DomainError(msg.str());
  }
  return structure_from_extent(L, P, g.hbar(), opts);
}

}  // namespace

StructureReport structure_report(const WaveFunction& psi, const StructureOptions& opts) {
  return from_moments(psi.grid(), position_moments(psi), momentum_moments(psi), opts);
}

StructureReport structure_report(const DensityMatrix& rho, const StructureOptions& opts) {
  return from_moments(rho.grid(), position_moments(rho), momentum_moments(rho), opts);
}

namespace {

struct ScanSetup {
  Displacement u;
  double resolution;
  double s_max;
};

ScanSetup scan_setup(const GridSpec& g, Displacement direction) {
  const double len = std::hypot(direction.delta_x, direction.delta_p);
  if (!(len > 0.0) || !std::isfinite(len)) throw DomainError("scan direction must be finite and non-zero");
  const Displacement u{direction.delta_x / len, direction.delta_p / len};
  double cell = std::numeric_limits<double>::infinity();
  double s_max = std::numeric_limits<double>::infinity();
  if (u.delta_x != 0.0) {
    cell = std::min(cell, g.dx() / std::abs(u.delta_x));
    s_max = std::min(s_max, 0.5 * g.extent() / std::abs(u.delta_x));
  }
  if (u.delta_p != 0.0) {
    cell = std::min(cell, g.dp() / std::abs(u.delta_p));
    s_max = std::min(s_max, kPi * g.hbar() / g.dx() / std::abs(u.delta_p));
  }
  return {u, 0.25 * cell, s_max};
}

}  // namespace

CoherenceScale coherence_scale(const WaveFunction& psi, Displacement direction, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("coherence threshold must lie in (0, 1)");
  const auto setup = scan_setup(psi.grid(), direction);
  const Displacement u = setup.u;
  const double s_max = setup.s_max;
  // Overlaps of spread-out states oscillate on the scale hbar/L, which can be
  // below one momentum cell, so the scan itself runs at the resolution.
  const double step = 0.25 * std::min(psi.grid().dx(), psi.grid().dp());
  const double norm = psi.norm_squared();

  CoherenceScale out;
  auto sample = [&](double s) {
    const Displacement d = s * u;
    const cplx z = inner(psi, displace(psi, d)) / norm;
    out.curve.push_back({d.delta_x, d.delta_p, z});
    return std::abs(z);
  };

  sample(0.0);
  double prev = 0.0;
  for (double s = step; s <= s_max; s += step) {
    if (sample(s) > threshold) {
      prev = s;
      continue;
    }
    double lo = prev;
    double hi = s;
    while (hi - lo > 1e-3 * step) {
      const double mid = 0.5 * (lo + hi);
      // Bisection samples are not part of the monotone scan curve.
      const double v = std::abs(inner(psi, displace(psi, mid * u))) / norm;
      (v > threshold ? lo : hi) = mid;
    }
    out.scale = 0.5 * (lo + hi);
    return out;
  }
  std::ostringstream msg;
  msg << "overlap did not fall below " << threshold << " within the grid (scanned to |delta|=" << s_max << ")";
  throw DomainError(msg.str());
}

std::optional<OverlapMinimum> first_overlap_minimum(const WaveFunction& psi, Displacement direction, double s_max) {
  const auto setup = scan_setup(psi.grid(), direction);
  const double limit = std::min(s_max, setup.s_max);
  const double norm = psi.norm_squared();
  auto f = [&](double s) { return std::abs(inner(psi, displace(psi, s * setup.u))) / norm; };
  const double h = setup.resolution;
  double a = 0.0, fa = 1.0;
  double b = h, fb = f(h);
  for (double c = 2.0 * h; c <= limit; c += h) {
    const double fc = f(c);
    if (fb < fa && fb <= fc) {
      double lo = a, hi = c;
      const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
      double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
      double f1 = f(m1), f2 = f(m2);
      while (hi - lo > 1e-6 * h) {
        if (f1 < f2) {
          hi = m2;
          m2 = m1;
          f2 = f1;
          m1 = hi - phi * (hi - lo);
          f1 = f(m1);
        } else {
          lo = m1;
          m1 = m2;
          f1 = f2;
          m2 = lo + phi * (hi - lo);
          f2 = f(m2);
        }
      }
      const double s = 0.5 * (lo + hi);
      return OverlapMinimum{s, f(s)};
    }
    a = b;
    fa = fb;
    b = c;
    fb = fc;
  }
  return std::nullopt;
}

std::optional<double> ripple_frequency(const WignerGrid& w, Axis axis, double at) {
  const std::vector<double> slice = axis == Axis::p ? w.row_near(at) : w.column_near(at);
  const double spacing = axis == Axis::p ? w.dp() : w.dx();
  // Zero padding refines the frequency lattice before peak interpolation.
  std::size_t m = 1;
  while (m < 4 * slice.size()) m <<= 1;
  std::vector<cplx> buf(m, cplx{0.0, 0.0});
  std::copy(slice.begin(), slice.end(), buf.begin());
  detail::fft_inplace(buf, detail::FftDirection::forward);
  const std::size_t half = m / 2;
  std::vector<double> amp(half + 1);
  for (std::size_t k = 0; k <= half; ++k) amp[k] = std::abs(buf[k]);
  const double top = *std::max_element(amp.begin(), amp.end());
  if (!(top > 0.0)) return std::nullopt;

  std::optional<std::size_t> best;
  for (std::size_t k = 1; k < half; ++k) {
    if (amp[k] > amp[k - 1] && amp[k] >= amp[k + 1] && amp[k] >= 1e-2 * top) best = k;
  }
  if (!best) return std::nullopt;
  const std::size_t k = *best;
  const double a = amp[k - 1], b = amp[k], c = amp[k + 1];
  const double denom = a - 2.0 * b + c;
  const double offset = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
  return 2.0 * kPi * (static_cast<double>(k) + offset) / (static_cast<double>(m) * spacing);
}

namespace {

// Catmull-Rom bicubic interpolation in index coordinates.
class Bicubic {
 public:
  explicit Bicubic(const WignerGrid& w) : w_(w) {}

  bool inside(double u, double v) const {
    return u >= 1.0 && v >= 1.0 && u <= static_cast<double>(w_.n_x()) - 3.0 && v <= static_cast<double>(w_.n_p()) - 3.0;
  }

  double operator()(double u, double v) const {
    const double fu = std::floor(u);
    const double fv = std::floor(v);
    const auto iu = static_cast<std::size_t>(fu);
    const auto iv = static_cast<std::size_t>(fv);
    double wu[4], wv[4];
    weights(u - fu, wu);
    weights(v - fv, wv);
    double s = 0.0;
    for (int a = 0; a < 4; ++a) {
      double r = 0.0;
      for (int b = 0; b < 4; ++b) r += wv[b] * w_(iu + a - 1, iv + b - 1);
      s += wu[a] * r;
    }
    return s;
  }

 private:
  static void weights(double t, double* out) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    out[0] = 0.5 * (-t3 + 2.0 * t2 - t);
    out[1] = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0);
    out[2] = 0.5 * (-3.0 * t3 + 4.0 * t2 + t);
    out[3] = 0.5 * (t3 - t2);
  }

  const WignerGrid& w_;
};

}  // namespace

TileMeasurement measure_central_tile(const WignerGrid& w, double x_c, double p_c, std::size_t rays) {
  if (rays < 8) throw DomainError("tile measurement needs at least 8 rays");
  const Bicubic f(w);
  const double u0 = (x_c - w.x_min()) / w.dx();
  const double v0 = (p_c - w.p_min()) / w.dp();
  if (!f.inside(u0, v0)) throw DomainError("tile centre lies outside the Wigner window");
  const double w0 = f(u0, v0);
  if (!(w0 != 0.0)) throw DomainError("Wigner function vanishes at the tile centre");
  const double sign = w0 > 0.0 ? 1.0 : -1.0;
  const double floor_level = 0.05 * std::abs(w0);
  constexpr double kStep = 0.05;

  TileMeasurement out;
  out.radii_x.resize(rays);
  out.radii_p.resize(rays);
  std::vector<double> radius(rays);

  parallel_for(0, rays, [&](std::size_t k) {
    const double theta = (static_cast<double>(k) + 0.5) * 2.0 * kPi / static_cast<double>(rays);
    const double cu = std::cos(theta);
    const double cv = std::sin(theta);
    auto g = [&](double r) { return sign * f(u0 + r * cu, v0 + r * cv); };
    double r_prev2 = 0.0, r_prev = 0.0;
    double g_prev2 = g(0.0), g_prev = g_prev2;
    double found = -1.0;
    for (double r = kStep;; r += kStep) {
      if (!f.inside(u0 + r * cu, v0 + r * cv)) break;
      const double gr = g(r);
      if (gr <= 0.0) {
        double lo = r_prev, hi = r;
        for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
          const double mid = 0.5 * (lo + hi);
          (g(mid) > 0.0 ? lo : hi) = mid;
        }
        found = 0.5 * (lo + hi);
        break;
      }
      // Touching zero: the interpolant dips to a small minimum and rises again.
      if (r_prev > 0.0 && g_prev < g_prev2 && g_prev <= gr && g_prev < floor_level) {
        double a = r_prev2, b = r;
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - phi * (b - a), d = a + phi * (b - a);
        double gc = g(c), gd = g(d);
        for (int it = 0; it < 80 && b - a > 1e-10; ++it) {
          if (gc < gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - phi * (b - a);
            gc = g(c);
          } else {
            a = c;
            c = d;
            gc = gd;
            d = a + phi * (b - a);
            gd = g(d);
          }
        }
        found = 0.5 * (a + b);
        break;
      }
      r_prev2 = r_prev;
      g_prev2 = g_prev;
      r_prev = r;
      g_prev = gr;
    }
    radius[k] = found;
    if (found > 0.0) {
      out.radii_x[k] = x_c + found * cu * w.dx();
      out.radii_p[k] = p_c + found * cv * w.dp();
    }
  });

  double area = 0.0;
  const double dtheta = 2.0 * kPi / static_cast<double>(rays);
  for (std::size_t k = 0; k < rays; ++k) {
    if (radius[k] < 0.0) throw DomainError("tile boundary not found inside the Wigner window on every ray");
    area += 0.5 * radius[k] * radius[k] * dtheta;
  }
  out.cell_area = area * w.dx() * w.dp();
  out.tile_area = 2.0 * out.cell_area;
  return out;
}

}  // namespace subplanck
