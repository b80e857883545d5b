#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "subplanck/error.hpp"
#include "subplanck/states.hpp"
#include "subplanck/wigner.hpp"

using namespace subplanck;

namespace {

constexpr double kHbar = 0.16;
constexpr double kXi = 0.4;

GridSpec grid1024() { return GridSpec::centered(1024, 0.05, kHbar); }

}  // namespace

TEST(Gaussian, MomentsAndUncertainty) {
  const auto g = grid1024();
  const auto psi = make_gaussian({0.7, -0.4, kXi}, g);
  EXPECT_NEAR(psi.norm_squared(), 1.0, 1e-10);
  const auto mx = position_moments(psi);
  const auto mp = momentum_moments(psi);
  EXPECT_NEAR(mx.mean, 0.7, g.dx() / 10);
  EXPECT_NEAR(mp.mean, -0.4, g.dp() / 10);
  EXPECT_NEAR(mx.stddev(), kXi / std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(mx.stddev() * mp.stddev(), kHbar / 2, 1e-9);
}

TEST(Gaussian, SupportViolationsAreReported) {
  const auto g = GridSpec::centered(64, 0.05, kHbar);
  EXPECT_THROW(make_gaussian({1.4, 0.0, kXi}, g), SupportError);
  EXPECT_THROW(make_gaussian({0.0, 9.0, kXi}, g), SupportError);
  EXPECT_THROW(make_gaussian({0.0, 0.0, -1.0}, g), DomainError);
  try {
    make_gaussian({1.4, 0.0, kXi}, g);
  } catch (const SupportError& e) {
    EXPECT_NE(std::string(e.what()).find("grid spans"), std::string::npos);
  }
}

TEST(Gaussian, WignerPeak) {
  const auto g = grid1024();
  const auto w = wigner_of_psi(make_gaussian({0.0, 0.0, kXi}, g));
  EXPECT_NEAR(w(512, 512), 1.0 / (kPi * kHbar), 1e-6);
}

TEST(Cat, Resolution) {
  EXPECT_TRUE(cat_resolved(2.0, kXi));
  EXPECT_FALSE(cat_resolved(0.9, kXi));
}

TEST(Cat, MidpointIsTwiceEitherPeak) {
  const auto g = grid1024();
  const double x0 = 2.0;
  const auto w = wigner_of_psi(make_cat(x0, kXi, g));
  const double centre = w(512, 512);
  const double peak = w(512 + 40, 512);
  EXPECT_NEAR(centre / peak, 2.0, 1e-6);
}

TEST(Cat, DegenerateLimitIsGaussian) {
  const auto g = grid1024();
  const auto psi = make_cat(0.0, kXi, g);
  EXPECT_GT(fidelity(psi, make_gaussian({0.0, 0.0, kXi}, g)), 1.0 - 1e-12);
  const auto w = wigner_of_psi(psi);
  for (double v : w.values()) EXPECT_GT(v, -1e-9);
}

TEST(Sparse, SinglePacketIsGaussian) {
  const auto g = grid1024();
  SparseSpec s;
  s.xi = kXi;
  s.packets = {{cplx{0.0, 1.0}, 0.5, 0.25}};
  const auto a = make_sparse(s, g);
  const auto b = make_gaussian({0.5, 0.25, kXi}, g);
  EXPECT_GT(fidelity(a, b), 1.0 - 1e-12);
}

TEST(Sparse, TwoEqualPacketsMatchCat) {
  const auto g = grid1024();
  SparseSpec s;
  s.xi = kXi;
  const double a = 1.0 / std::sqrt(2.0);
  s.packets = {{cplx{a, 0.0}, -2.0, 0.0}, {cplx{a, 0.0}, 2.0, 0.0}};
  const auto sp = make_sparse(s, g);
  const auto cat = make_cat(2.0, kXi, g);
  for (std::size_t i = 0; i < g.n(); ++i) EXPECT_NEAR(std::abs(sp[i] - cat[i]), 0.0, 1e-12);
}

TEST(Sparse, RandomSixteenIsNormalisedAndPure) {
  const auto g = GridSpec::centered(2048, 40.0 / 2048, kHbar);
  const auto spec = random_sparse_spec(16, kXi, kHbar, -14.0, 14.0, -1.3, 1.3, 7);
  EXPECT_EQ(spec.packets.size(), 16u);
  EXPECT_TRUE(spec.sparse(kHbar));
  const auto psi = make_sparse(spec, g);
  EXPECT_NEAR(psi.norm_squared(), 1.0, 1e-9);
  EXPECT_NEAR(pure_density(make_sparse(spec, GridSpec::centered(512, 40.0 / 512, kHbar))).purity(), 1.0, 1e-6);
  double mean = 0.0;
  const auto w = spec.weights();
  double spread = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) mean += w[k] * spec.packets[k].x;
  for (std::size_t k = 0; k < w.size(); ++k) spread += w[k] * std::pow(spec.packets[k].x - mean, 2);
  EXPECT_NEAR(position_moments(psi).mean, mean, 0.01 * std::sqrt(spread));
}

TEST(Sparse, RandomSpecIsDeterministic) {
  const auto a = random_sparse_spec(8, kXi, kHbar, -10, 10, -2, 2, 99);
  const auto b = random_sparse_spec(8, kXi, kHbar, -10, 10, -2, 2, 99);
  const auto c = random_sparse_spec(8, kXi, kHbar, -10, 10, -2, 2, 100);
  for (std::size_t k = 0; k < a.packets.size(); ++k) {
    EXPECT_EQ(a.packets[k].x, b.packets[k].x);
    EXPECT_EQ(a.packets[k].alpha, b.packets[k].alpha);
  }
  EXPECT_NE(a.packets[0].x, c.packets[0].x);
  EXPECT_THROW(random_sparse_spec(500, kXi, kHbar, -1, 1, -0.1, 0.1, 1), DomainError);
}

TEST(Sparse, SparsityFlag) {
  SparseSpec s;
  s.xi = kXi;
  s.packets = {{1.0, 0.0, 0.0}, {1.0, 1.0, 0.0}};
  EXPECT_FALSE(s.sparse(kHbar));
  s.packets[1].x = 2.5;
  EXPECT_TRUE(s.sparse(kHbar));
  EXPECT_TRUE((CompassSpec{8.0, 8.0, kXi}).sparse(kHbar));
  EXPECT_FALSE((CompassSpec{1.0, 8.0, kXi}).sparse(kHbar));
}

TEST(Compass, NormalisedAndPure) {
  const auto g = GridSpec::centered(1024, 0.03, kHbar);
  const auto psi = make_compass({4.0, 4.0, kXi}, g);
  EXPECT_NEAR(psi.norm_squared(), 1.0, 1e-10);
  const auto w = wigner_of_psi(psi);
  EXPECT_NEAR(moyal_overlap(w, w), 1.0, 1e-6);
  EXPECT_THROW(make_compass({0.0, 4.0, kXi}, g), DomainError);
}

TEST(Oracle, KnownValues) {
  const GaussianOracle go{{0.3, -0.2, kXi}, kHbar};
  EXPECT_NEAR(analytic_wigner(go, 0.3, -0.2), 1.0 / (kPi * kHbar), 1e-12);
  const double x0 = 2.0;
  const CatOracle co{x0, kXi, kHbar, false};
  const double p = kPi * kHbar / (4.0 * x0);
  const double ripple = analytic_wigner(co, 0.0, p) -
                        0.5 * (oracle::gaussian_wigner(0.0, p, -x0, 0, kXi, kHbar) +
                               oracle::gaussian_wigner(0.0, p, x0, 0, kXi, kHbar));
  EXPECT_NEAR(ripple, 0.0, 1e-12);
  EXPECT_EQ(parse_oracle_kind("compass-interference"), OracleKind::compass_interference);
  EXPECT_THROW(parse_oracle_kind("husimi"), DomainError);
}

TEST(Oracle, CompassProductFormMatchesSum) {
  const CompassInterferenceOracle o{{8.0, 16.0, kXi}, kHbar};
  for (double x = -0.5; x <= 0.5; x += 0.0173) {
    for (double p = -0.5; p <= 0.5; p += 0.0191) {
      EXPECT_NEAR(analytic_wigner(o, x, p), compass_interference_product_form(o, x, p), 1e-12);
    }
  }
}

// Zero lines of cos(pL/hbar) + cos(xP/hbar) found by brute force: along the
// diagonal direction (x/x1, p/p1) with x1 = pi hbar/(2P), p1 = pi hbar/(2L)
// the first zero sits at parameter 1, i.e. at (pi hbar/2P, pi hbar/2L).
TEST(Oracle, CompassZeroLocationsByScan) {
  const double L = 8.0, P = 16.0;
  const CompassInterferenceOracle o{{L, P, kXi}, kHbar};
  const double x1 = kPi * kHbar / (2 * P);
  const double p1 = kPi * kHbar / (2 * L);
  double first = -1.0;
  double prev = analytic_wigner(o, 0.0, 0.0);
  for (int k = 1; k <= 200000; ++k) {
    const double s = k * 1e-5;
    const double v = analytic_wigner(o, s * x1, s * p1);
    if ((v > 0) != (prev > 0)) {
      first = s;
      break;
    }
    prev = v;
  }
  EXPECT_NEAR(first, 1.0, 2e-5);
  // The swapped reading (pi hbar/2L, pi hbar/2P) is not a zero when L != P.
  EXPECT_GT(std::abs(analytic_wigner(o, kPi * kHbar / (2 * L), kPi * kHbar / (2 * P))), 0.1);
}
