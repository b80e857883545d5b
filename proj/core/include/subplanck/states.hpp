#pragma once

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "subplanck/grid.hpp"

namespace subplanck {

/// Minimum-uncertainty packet exp(-(x-x0)^2/(2 xi^2) + i p0 x/hbar).
/// Position std is xi/sqrt(2), momentum std hbar/(xi sqrt(2)).
struct GaussianPacket {
  double x0 = 0.0;
  double p0 = 0.0;
  double xi = 1.0;
};

/// Four packets: east/west at (+-L/2, 0), north/south at (0, +-P/2).
struct CompassSpec {
  double L = 1.0;
  double P = 1.0;
  double xi = 1.0;

  /// L > 5 xi and P > 5 hbar/xi.
  bool sparse(double hbar) const;
};

struct SparsePacket {
  cplx alpha;
  double x = 0.0;
  double p = 0.0;
};

/// Superposition sum_k alpha_k G(x_k, p_k, xi).
struct SparseSpec {
  std::vector<SparsePacket> packets;
  double xi = 1.0;

  /// w_k = |alpha_k|^2 / sum |alpha|^2
  std::vector<double> weights() const;

  /// Every pair is more than five widths apart in phase space, measured as
  /// sqrt((dx/xi)^2 + (dp xi/hbar)^2) > 5.
  bool sparse(double hbar) const;
};

/// Throws SupportError unless the packet keeps a 6-sigma vacuum margin from
/// the grid edges in both position and momentum.
void check_support(const GaussianPacket& g, const GridSpec& grid);

/// Unnormalised packet amplitudes on the grid.
std::vector<cplx> gaussian_amplitudes(const GaussianPacket& g, const GridSpec& grid);

WaveFunction make_gaussian(const GaussianPacket& g, const GridSpec& grid);

/// Even cat G(-x0) + G(+x0), normalised numerically.
WaveFunction make_cat(double x0, double xi, const GridSpec& grid);

/// Peaks resolved when 2 x0 > 5 xi.
bool cat_resolved(double x0, double xi);

WaveFunction make_compass(const CompassSpec& c, const GridSpec& grid);

WaveFunction make_sparse(const SparseSpec& s, const GridSpec& grid);

/// Draws `count` equal-weight packets with random phases inside the box
/// [x_lo, x_hi] x [p_lo, p_hi] by dart throwing with a minimum scaled
/// separation of `min_separation` widths. Deterministic for a given seed and
/// independent of the standard library implementation.
/// Throws DomainError if the box cannot hold the packets.
SparseSpec random_sparse_spec(std::size_t count, double xi, double hbar, double x_lo, double x_hi, double p_lo,
                              double p_hi, std::uint64_t seed, double min_separation = 5.5);

/// Closed-form Wigner functions used as oracles.
struct GaussianOracle {
  GaussianPacket packet;
  double hbar;
};

/// Even two-Gaussian cat at +-x0 with zero mean momentum. With
/// exact_normalization the sparse-limit formula is divided by
/// 1 + exp(-x0^2/xi^2), the exact norm of the superposition.
struct CatOracle {
  double x0;
  double xi;
  double hbar;
  bool exact_normalization = true;
};

/// Central north-south plus east-west interference term of a compass.
struct CompassInterferenceOracle {
  CompassSpec compass;
  double hbar;
};

using WignerOracle = std::variant<GaussianOracle, CatOracle, CompassInterferenceOracle>;

enum class OracleKind { gaussian, cat, compass_interference };

/// Parses "gaussian", "cat" or "compass-interference"; throws DomainError otherwise.
OracleKind parse_oracle_kind(std::string_view name);

double analytic_wigner(const WignerOracle& oracle, double x, double p);

/// Product form 2 cos((Px + Lp)/2hbar) cos((Px - Lp)/2hbar) of the compass
/// interference factor, times the same envelope as analytic_wigner.
double compass_interference_product_form(const CompassInterferenceOracle& oracle, double x, double p);

}  // namespace subplanck
