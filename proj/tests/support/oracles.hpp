#pragma once

// Independent reference values used by the tests. Nothing here calls the
// library's transforms: Wigner values come from direct quadrature of analytic
// wave functions and overlaps from closed forms.

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

/// Normalised packet (pi xi^2)^(-1/4) exp(-(x-x0)^2/(2 xi^2) + i p0 x/hbar).
inline cplx gaussian_psi(double x, double x0, double p0, double xi, double hbar) {
  const double u = x - x0;
  return std::pow(pi * xi * xi, -0.25) * std::exp(-u * u / (2.0 * xi * xi)) * std::polar(1.0, p0 * x / hbar);
}

/// Momentum amplitude of gaussian_psi with the 1/sqrt(2 pi hbar) convention.
inline cplx gaussian_phi(double p, double x0, double p0, double xi, double hbar) {
  const double v = p - p0;
  return std::pow(pi * xi * xi, -0.25) * xi / std::sqrt(hbar) * std::exp(-v * v * xi * xi / (2.0 * hbar * hbar)) *
         std::polar(1.0, -v * x0 / hbar);
}

/// (pi hbar)^-1 exp(-(x-x0)^2/xi^2 - (p-p0)^2 xi^2/hbar^2)
inline double gaussian_wigner(double x, double p, double x0, double p0, double xi, double hbar) {
  const double u = (x - x0) / xi;
  const double v = (p - p0) * xi / hbar;
  return std::exp(-u * u - v * v) / (pi * hbar);
}

/// W(x,p) = 1/(2 pi hbar) int exp(i p y/hbar) psi*(x+y/2) psi(x-y/2) dy by
/// composite Simpson over [-y_max, y_max].
inline double quadrature_wigner(const std::function<cplx(double)>& psi, double x, double p, double hbar,
                                double y_max, int panels = 4000) {
  const double h = 2.0 * y_max / panels;
  cplx s{0.0, 0.0};
  for (int k = 0; k <= panels; ++k) {
    const double y = -y_max + k * h;
    const double w = (k == 0 || k == panels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    s += w * std::polar(1.0, p * y / hbar) * std::conj(psi(x + 0.5 * y)) * psi(x - 0.5 * y);
  }
  return (s * h / 3.0).real() / (2.0 * pi * hbar);
}

/// int f(x) dx over [a, b], composite Simpson.
inline cplx simpson(const std::function<cplx(double)>& f, double a, double b, int panels = 4000) {
  const double h = (b - a) / panels;
  cplx s{0.0, 0.0};
  for (int k = 0; k <= panels; ++k) {
    const double w = (k == 0 || k == panels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    s += w * f(a + k * h);
  }
  return s * h / 3.0;
}

/// |<G|D(dx, dp) G>| for a minimum-uncertainty packet of width xi.
inline double gaussian_overlap_abs(double dx, double dp, double xi, double hbar) {
  const double u = dx / xi;
  const double v = dp * xi / hbar;
  return std::exp(-0.25 * (u * u + v * v));
}

/// Eigenvalues of [[a, b], [b*, d]] with a, d real.
inline std::pair<double, double> hermitian2_eigs(double a, double d, cplx b) {
  const double m = 0.5 * (a + d);
  const double r = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  return {m - r, m + r};
}

/// Least-squares slope of y against x.
template <typename Range>
double fit_slope(const Range& xs, const Range& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
