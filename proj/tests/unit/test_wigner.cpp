#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "subplanck/decoherence.hpp"
#include "subplanck/error.hpp"
#include "subplanck/states.hpp"
#include "subplanck/wigner.hpp"

using namespace subplanck;

namespace {

constexpr double kHbar = 0.16;
constexpr double kXi = 0.4;

GridSpec grid1024() { return GridSpec::centered(1024, 0.05, kHbar); }

double max_abs_error(const WignerGrid& w, const auto& exact) {
  double err = 0.0;
  for (std::size_t i = 0; i < w.n_x(); ++i) {
    for (std::size_t j = 0; j < w.n_p(); ++j) err = std::max(err, std::abs(w(i, j) - exact(w.x(i), w.p(j))));
  }
  return err;
}

}  // namespace

TEST(Wigner, GaussianMatchesClosedForm) {
  const auto g = grid1024();
  const GaussianPacket pk{0.35, -0.6, kXi};
  const auto w = wigner_of_psi(make_gaussian(pk, g));
  const double err = max_abs_error(w, [&](double x, double p) {
    return oracle::gaussian_wigner(x, p, pk.x0, pk.p0, pk.xi, kHbar);
  });
  EXPECT_LT(err, 1e-8);
}

TEST(Wigner, CatMatchesClosedForm) {
  const auto g = grid1024();
  for (double x0 : {0.8, 2.0, 5.0}) {
    const auto w = wigner_of_psi(make_cat(x0, kXi, g));
    const CatOracle o{x0, kXi, kHbar};
    EXPECT_LT(max_abs_error(w, [&](double x, double p) { return analytic_wigner(o, x, p); }), 1e-6) << x0;
  }
}

TEST(Wigner, CompassMatchesDirectQuadrature) {
  const auto g = grid1024();
  const CompassSpec c{3.0, 4.0, kXi};
  const auto psi = make_compass(c, g);
  const auto w = wigner_of_psi(psi);
  // Same superposition evaluated analytically, normalised by its grid norm.
  const double norm = std::sqrt([&] {
    double s = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i) {
      const double x = g.x(i);
      const cplx v = oracle::gaussian_psi(x, 0, 0.5 * c.P, kXi, kHbar) + oracle::gaussian_psi(x, -0.5 * c.L, 0, kXi, kHbar) +
                     oracle::gaussian_psi(x, 0, -0.5 * c.P, kXi, kHbar) + oracle::gaussian_psi(x, 0.5 * c.L, 0, kXi, kHbar);
      s += std::norm(v);
    }
    return s * g.dx();
  }());
  const auto f = [&](double x) {
    return (oracle::gaussian_psi(x, 0, 0.5 * c.P, kXi, kHbar) + oracle::gaussian_psi(x, -0.5 * c.L, 0, kXi, kHbar) +
            oracle::gaussian_psi(x, 0, -0.5 * c.P, kXi, kHbar) + oracle::gaussian_psi(x, 0.5 * c.L, 0, kXi, kHbar)) /
           norm;
  };
  for (std::size_t i : {512u, 530u, 470u, 542u}) {
    for (std::size_t j : {512u, 520u, 490u, 600u}) {
      EXPECT_NEAR(w(i, j), oracle::quadrature_wigner(f, g.x(i), g.p(j), kHbar, 12.0, 12000), 1e-7);
    }
  }
}

TEST(Wigner, NormalisationPurityAndBound) {
  const auto g = grid1024();
  for (const auto& psi : {make_gaussian({1.0, 0.5, kXi}, g), make_cat(3.0, kXi, g), make_compass({4, 4, kXi}, g)}) {
    const auto w = wigner_of_psi(psi);
    EXPECT_NEAR(w.integral(), 1.0, 1e-6);
    EXPECT_NEAR(moyal_overlap(w, w), 1.0, 1e-6);
    for (double v : w.values()) {
      ASSERT_TRUE(std::isfinite(v));
      ASSERT_LE(std::abs(v), 1.0 / (kPi * kHbar) + 1e-6);
    }
  }
}

TEST(Wigner, WindowIsSubBlock) {
  const auto g = GridSpec::centered(256, 0.1, kHbar);
  const auto psi = make_cat(2.0, kXi, g);
  const auto full = wigner_of_psi(psi);
  WignerWindow win;
  win.x_range = {{-1.0, 1.5}};
  win.p_range = {{-0.5, 0.25}};
  const auto part = wigner_of_psi(psi, win);
  EXPECT_NEAR(part.x_min(), -1.0, 1e-12);
  EXPECT_EQ(part.n_x(), 26u);
  const std::size_t i0 = static_cast<std::size_t>(std::lround((part.x_min() - full.x_min()) / full.dx()));
  const std::size_t j0 = static_cast<std::size_t>(std::lround((part.p_min() - full.p_min()) / full.dp()));
  for (std::size_t i = 0; i < part.n_x(); ++i) {
    for (std::size_t j = 0; j < part.n_p(); ++j) EXPECT_EQ(part(i, j), full(i0 + i, j0 + j));
  }
  win.x_range = {{100.0, 200.0}};
  EXPECT_THROW(wigner_of_psi(psi, win), DomainError);
}

TEST(Wigner, TranslationCovariance) {
  const auto g = GridSpec::centered(512, 0.05, kHbar);
  const auto psi = make_cat(1.5, kXi, g);
  const int si = 7, sj = -5;
  const Displacement d{si * g.dx(), sj * g.dp()};
  const auto w0 = wigner_of_psi(psi);
  const auto w1 = wigner_of_psi(displace(psi, d));
  double err = 0.0;
  for (std::size_t i = 40; i + 40 < g.n(); ++i) {
    for (std::size_t j = 40; j + 40 < g.n(); ++j) {
      err = std::max(err, std::abs(w1(i, j) - w0(i - si, j - sj)));
    }
  }
  EXPECT_LT(err, 1e-6);
}

TEST(WignerRho, PureProjectorMatchesPsi) {
  const auto g = GridSpec::centered(256, 0.1, kHbar);
  const auto psi = make_compass({3.0, 3.0, kXi}, g);
  const auto a = wigner_of_psi(psi);
  const auto b = wigner_of_rho(pure_density(psi));
  ASSERT_TRUE(a.same_axes(b));
  for (std::size_t k = 0; k < a.values().size(); ++k) ASSERT_NEAR(a.values()[k], b.values()[k], 1e-10);
}

TEST(WignerRho, MixtureIsSumOfPeaks) {
  const auto g = GridSpec::centered(256, 0.1, kHbar);
  const double x0 = 2.5;
  const auto a = make_gaussian({-x0, 0.0, kXi}, g);
  const auto b = make_gaussian({x0, 0.0, kXi}, g);
  const MixtureComponent mix[] = {{0.5, a}, {0.5, b}};
  const auto w = wigner_of_rho(build_density(mix));
  const double err = max_abs_error(w, [&](double x, double p) {
    return 0.5 * (oracle::gaussian_wigner(x, p, -x0, 0, kXi, kHbar) + oracle::gaussian_wigner(x, p, x0, 0, kXi, kHbar));
  });
  EXPECT_LT(err, 1e-8);
  for (double v : w.values()) EXPECT_GT(v, -1e-9);
  // Linearity against the pure-state transforms.
  const auto wa = wigner_of_psi(a);
  const auto wb = wigner_of_psi(b);
  for (std::size_t k = 0; k < w.values().size(); ++k) {
    ASSERT_NEAR(w.values()[k], 0.5 * (wa.values()[k] + wb.values()[k]), 1e-10);
  }
  // Purity identity for a mixed state.
  EXPECT_NEAR(moyal_overlap(w, w), build_density(mix).purity(), 1e-6);
}

TEST(Moyal, MatchesOverlapAndIsSymmetric) {
  const auto g = grid1024();
  const double x0 = 2.0;
  const auto cat = make_cat(x0, kXi, g);
  const double dp = kPi * kHbar / (2 * x0);
  const auto shifted = displace(cat, {0.0, dp});
  const auto w1 = wigner_of_psi(cat);
  const auto w2 = wigner_of_psi(shifted);
  const double expected = std::norm(oracle::simpson(
      [&](double x) {
        const cplx v = oracle::gaussian_psi(x, -x0, 0, kXi, kHbar) + oracle::gaussian_psi(x, x0, 0, kXi, kHbar);
        return std::norm(v) / (2.0 * (1.0 + std::exp(-x0 * x0 / (kXi * kXi)))) * std::polar(1.0, dp * x / kHbar);
      },
      -10, 10, 20000));
  EXPECT_NEAR(moyal_overlap(w1, w2), expected, 1e-6);
  EXPECT_NEAR(moyal_overlap(w1, w2), std::norm(inner(cat, shifted)), 1e-6);
  EXPECT_EQ(moyal_overlap(w1, w2), moyal_overlap(w2, w1));

  const auto far1 = wigner_of_psi(make_gaussian({-8.0, 0.0, kXi}, g));
  const auto far2 = wigner_of_psi(make_gaussian({8.0, 0.0, kXi}, g));
  EXPECT_NEAR(moyal_overlap(far1, far2), 0.0, 1e-8);

  const auto other = wigner_of_psi(make_gaussian({0.0, 0.0, kXi}, GridSpec::centered(512, 0.05, kHbar)));
  EXPECT_THROW(moyal_overlap(w1, other), ShapeError);
}

TEST(Structure, VacuumGaussian) {
  const auto g = grid1024();
  const auto r = structure_report(make_gaussian({0.0, 0.0, kXi}, g));
  EXPECT_NEAR(r.L, kXi / std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(r.P, kHbar / (kXi * std::sqrt(2.0)), 1e-9);
  EXPECT_NEAR(r.A, kHbar / 2, 1e-9);
  EXPECT_NEAR(r.a_sub, 2 * kHbar, 1e-8);
  EXPECT_NEAR(r.n_states, 1.0 / (4 * kPi), 1e-9);
  EXPECT_DOUBLE_EQ(r.a_sub * r.A, kHbar * kHbar);
  EXPECT_GE(r.A, kHbar / 2 - 1e-9);
  EXPECT_FALSE(r.t_r.has_value());
}

TEST(Structure, FromExtentAndTimescales) {
  const auto r = structure_from_extent(8.0, 8.0, kHbar);
  EXPECT_NEAR(r.tile_area, std::pow(2 * kPi * kHbar, 2) / 64.0, 1e-15);
  EXPECT_NEAR(r.tile_area, 0.0158, 1e-4);
  EXPECT_NEAR(r.delta_p_min, 0.02, 1e-15);
  StructureOptions opt;
  opt.lyapunov = 0.2;
  opt.delta_p0 = 1.0;
  const auto t = structure_from_extent(2.0, 2.0, kHbar, opt);
  EXPECT_NEAR(*t.t_r, 5.0 * std::log(25.0), 1e-12);
  EXPECT_NEAR(*t.t_hbar, 5.0 * std::log(6.25), 1e-12);
}

TEST(Structure, DeltaStateRejected) {
  const auto g = GridSpec::centered(64, 0.1, kHbar);
  std::vector<cplx> amp(64, cplx{0.0, 0.0});
  amp[32] = 1.0 / std::sqrt(0.1);
  EXPECT_THROW(structure_report(WaveFunction(g, amp)), DomainError);
}

TEST(Structure, DensityMatchesPure) {
  const auto g = GridSpec::centered(256, 0.1, kHbar);
  const auto psi = make_cat(2.0, kXi, g);
  const auto a = structure_report(psi);
  const auto b = structure_report(pure_density(psi));
  EXPECT_NEAR(a.L, b.L, 1e-10);
  EXPECT_NEAR(a.P, b.P, 1e-9);
}

TEST(Coherence, GaussianCrossingsMatchCharacteristicFunction) {
  const auto g = grid1024();
  const auto psi = make_gaussian({0.0, 0.0, kXi}, g);
  const auto cp = coherence_scale(psi, {0.0, 1.0});
  EXPECT_NEAR(cp.scale, 2.0 * kHbar / kXi, g.dp() / 4);
  const auto cx = coherence_scale(psi, {1.0, 0.0});
  EXPECT_NEAR(cx.scale, 2.0 * kXi, g.dx() / 4);
  for (const auto& s : cp.curve) {
    EXPECT_NEAR(std::abs(s.z), oracle::gaussian_overlap_abs(s.delta_x, s.delta_p, kXi, kHbar), 1e-9);
  }
  // A different threshold moves the crossing as the closed form predicts.
  const double thr = std::exp(-0.5);
  EXPECT_NEAR(coherence_scale(psi, {0.0, 1.0}, thr).scale, std::sqrt(2.0) * kHbar / kXi, g.dp() / 4);
}

TEST(Coherence, SaturationFailureIsReported) {
  const auto g = GridSpec::centered(128, 0.05, kHbar);
  const auto psi = make_gaussian({0.0, 0.0, kXi}, g);
  EXPECT_THROW(coherence_scale(psi, {1.0, 0.0}, 1e-30), DomainError);
  EXPECT_THROW(coherence_scale(psi, {0.0, 0.0}), DomainError);
  EXPECT_THROW(coherence_scale(psi, {1.0, 0.0}, 1.5), DomainError);
}

TEST(Coherence, CompassFirstOrthogonality) {
  const double L = 4.0, P = 4.0;
  const auto g = GridSpec::centered(2048, 0.0209, kHbar);
  const auto psi = make_compass({L, P, kXi}, g);
  const auto mx = first_overlap_minimum(psi, {1.0, 0.0}, 3 * kPi * kHbar / P);
  ASSERT_TRUE(mx.has_value());
  EXPECT_NEAR(mx->shift, 2 * kPi * kHbar / P, g.dx());
  EXPECT_LT(mx->overlap, 0.05);
  const auto mp = first_overlap_minimum(psi, {0.0, 1.0}, 3 * kPi * kHbar / L);
  ASSERT_TRUE(mp.has_value());
  EXPECT_NEAR(mp->shift, 2 * kPi * kHbar / L, g.dp());
}

TEST(Ripple, CatAlongMomentum) {
  const auto g = grid1024();
  const double x0 = 2.0;
  const auto w = wigner_of_psi(make_cat(x0, kXi, g));
  const auto f = ripple_frequency(w, Axis::p, 0.0);
  ASSERT_TRUE(f.has_value());
  const double bin = 2 * kPi / (g.n() * g.dp());
  EXPECT_NEAR(*f, 2 * x0 / kHbar, bin);
  EXPECT_NEAR(*f, 25.0, bin);
}

TEST(Ripple, GaussianHasNone) {
  const auto g = grid1024();
  const auto w = wigner_of_psi(make_gaussian({0.0, 0.0, kXi}, g));
  EXPECT_FALSE(ripple_frequency(w, Axis::p, 0.0).has_value());
  EXPECT_FALSE(ripple_frequency(w, Axis::x, 0.0).has_value());
}

TEST(Ripple, CompassAlongPosition) {
  const auto g = GridSpec::centered(1024, 0.03, kHbar);
  const double P = 4.0;
  const auto w = wigner_of_psi(make_compass({4.0, P, kXi}, g));
  const auto f = ripple_frequency(w, Axis::x, 0.0);
  ASSERT_TRUE(f.has_value());
  EXPECT_NEAR(*f, P / kHbar, 2 * kPi / (g.n() * g.dx()));
}

TEST(Tile, CompassCentralTileArea) {
  const double L = 4.0, P = 4.0;
  const double dx = kPi * kHbar / (6 * P);
  const auto g = GridSpec::centered(4096, dx, kHbar);
  const auto psi = make_compass({L, P, kXi}, g);
  WignerWindow win;
  win.x_range = {{-0.3, 0.3}};
  win.p_range = {{-0.3, 0.3}};
  const auto w = wigner_of_psi(psi, win);
  const auto t = measure_central_tile(w);
  const double expect = std::pow(2 * kPi * kHbar, 2) / (L * P);
  EXPECT_NEAR(t.tile_area / expect, 1.0, 0.1);
  // Cell vertices lie on the axes at pi hbar/P and pi hbar/L.
  EXPECT_NEAR(t.cell_area, 2.0 * (kPi * kHbar / P) * (kPi * kHbar / L), 0.1 * t.cell_area);
}

TEST(Tile, WindowTooSmallIsReported) {
  const auto g = GridSpec::centered(1024, 0.03, kHbar);
  const auto psi = make_gaussian({0.0, 0.0, kXi}, g);
  WignerWindow win;
  win.x_range = {{-0.2, 0.2}};
  win.p_range = {{-0.2, 0.2}};
  EXPECT_THROW(measure_central_tile(wigner_of_psi(psi, win)), DomainError);
}
