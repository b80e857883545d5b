#include "subplanck/states.hpp"

#include <cmath>
#include <sstream>

#include "rng.hpp"
#include "subplanck/error.hpp"

namespace subplanck {

namespace {

constexpr double kMarginSigmas = 6.0;

using detail::SplitMix;

WaveFunction normalize_sum(const GridSpec& grid, std::vector<cplx> amp) {
  return WaveFunction(grid, std::move(amp)).normalized();
}

}  // namespace

bool CompassSpec::sparse(double hbar) const { return L > 5.0 * xi && P > 5.0 * hbar / xi; }

std::vector<double> SparseSpec::weights() const {
  double total = 0.0;
  for (const auto& k : packets) total += std::norm(k.alpha);
  std::vector<double> w;
  w.reserve(packets.size());
  for (const auto& k : packets) w.push_back(std::norm(k.alpha) / total);
  return w;
}

bool SparseSpec::sparse(double hbar) const {
  for (std::size_t a = 0; a < packets.size(); ++a) {
    for (std::size_t b = a + 1; b < packets.size(); ++b) {
      const double sx = (packets[a].x - packets[b].x) / xi;
      const double sp = (packets[a].p - packets[b].p) * xi / hbar;
      if (std::hypot(sx, sp) <= 5.0) return false;
    }
  }
  return true;
}

void check_support(const GaussianPacket& g, const GridSpec& grid) {
  if (!(g.xi > 0.0)) throw DomainError("packet width xi must be positive");
  const double sx = g.xi / std::sqrt(2.0);
  const double sp = grid.hbar() / (g.xi * std::sqrt(2.0));
  const double lo = g.x0 - kMarginSigmas * sx;
  const double hi = g.x0 + kMarginSigmas * sx;
  const double p_edge = -grid.p_min();
  std::ostringstream msg;
  if (lo < grid.x_min() || hi > grid.x_max()) {
    msg << "packet at x0=" << g.x0 << " needs [" << lo << ", " << hi << "] but the grid spans [" << grid.x_min()
        << ", " << grid.x_max() << "]";
    throw SupportError(msg.str());
  }
  if (std::abs(g.p0) + kMarginSigmas * sp > p_edge) {
    msg << "packet at p0=" << g.p0 << " with momentum std " << sp << " exceeds the momentum range +-" << p_edge;
    throw SupportError(msg.str());
  }
}

std::vector<cplx> gaussian_amplitudes(const GaussianPacket& g, const GridSpec& grid) {
  std::vector<cplx> amp(grid.n());
  const double inv_two_xi2 = 1.0 / (2.0 * g.xi * g.xi);
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const double x = grid.x(i);
    const double u = x - g.x0;
    amp[i] = std::polar(std::exp(-u * u * inv_two_xi2), g.p0 * x / grid.hbar());
  }
  return amp;
}

WaveFunction make_gaussian(const GaussianPacket& g, const GridSpec& grid) {
  check_support(g, grid);
  return normalize_sum(grid, gaussian_amplitudes(g, grid));
}

bool cat_resolved(double x0, double xi) { return 2.0 * std::abs(x0) > 5.0 * xi; }

WaveFunction make_cat(double x0, double xi, const GridSpec& grid) {
  SparseSpec s;
  s.xi = xi;
  s.packets = {{cplx{1.0, 0.0}, -x0, 0.0}, {cplx{1.0, 0.0}, x0, 0.0}};
  return make_sparse(s, grid);
}

WaveFunction make_compass(const CompassSpec& c, const GridSpec& grid) {
  if (!(c.L > 0.0) || !(c.P > 0.0)) throw DomainError("compass separations must be positive");
  SparseSpec s;
  s.xi = c.xi;
  s.packets = {{cplx{1.0, 0.0}, 0.0, 0.5 * c.P},
               {cplx{1.0, 0.0}, -0.5 * c.L, 0.0},
               {cplx{1.0, 0.0}, 0.0, -0.5 * c.P},
               {cplx{1.0, 0.0}, 0.5 * c.L, 0.0}};
  return make_sparse(s, grid);
}

WaveFunction make_sparse(const SparseSpec& s, const GridSpec& grid) {
  if (s.packets.empty()) throw DomainError("sparse superposition needs at least one packet");
  std::vector<cplx> amp(grid.n(), cplx{0.0, 0.0});
  for (const auto& k : s.packets) {
    const GaussianPacket g{k.x, k.p, s.xi};
    check_support(g, grid);
    // Each term is normalised on its own so alpha_k are true amplitudes.
    const auto term = normalize_sum(grid, gaussian_amplitudes(g, grid));
    for (std::size_t i = 0; i < amp.size(); ++i) amp[i] += k.alpha * term[i];
  }
  return normalize_sum(grid, std::move(amp));
}

SparseSpec random_sparse_spec(std::size_t count, double xi, double hbar, double x_lo, double x_hi, double p_lo,
                              double p_hi, std::uint64_t seed, double min_separation) {
  SplitMix rng(seed);
  SparseSpec s;
  s.xi = xi;
  const double amp = 1.0 / std::sqrt(static_cast<double>(count));
  const std::size_t max_attempts = 2000 * (count + 1);
  std::size_t attempts = 0;
  while (s.packets.size() < count) {
    if (++attempts > max_attempts) {
      throw DomainError("could not place " + std::to_string(count) + " separated packets in the box");
    }
    const double x = x_lo + (x_hi - x_lo) * rng.uniform();
    const double p = p_lo + (p_hi - p_lo) * rng.uniform();
    bool ok = true;
    for (const auto& k : s.packets) {
      if (std::hypot((x - k.x) / xi, (p - k.p) * xi / hbar) <= min_separation) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const double phase = 2.0 * kPi * rng.uniform();
    s.packets.push_back({std::polar(amp, phase), x, p});
  }
  return s;
}

OracleKind parse_oracle_kind(std::string_view name) {
  if (name == "gaussian") return OracleKind::gaussian;
  if (name == "cat") return OracleKind::cat;
  if (name == "compass-interference") return OracleKind::compass_interference;
  throw DomainError("unknown Wigner oracle kind '" + std::string(name) + "'");
}

namespace {

double gaussian_wigner(double x, double p, double x0, double p0, double xi, double hbar) {
  const double u = (x - x0) / xi;
  const double v = (p - p0) * xi / hbar;
  return std::exp(-u * u - v * v) / (kPi * hbar);
}

struct OracleEval {
  double x;
  double p;

  double operator()(const GaussianOracle& o) const {
    return gaussian_wigner(x, p, o.packet.x0, o.packet.p0, o.packet.xi, o.hbar);
  }

  double operator()(const CatOracle& o) const {
    const double peaks =
        0.5 * (gaussian_wigner(x, p, -o.x0, 0.0, o.xi, o.hbar) + gaussian_wigner(x, p, o.x0, 0.0, o.xi, o.hbar));
    const double ripple = gaussian_wigner(x, p, 0.0, 0.0, o.xi, o.hbar) * std::cos(2.0 * p * o.x0 / o.hbar);
    const double w = peaks + ripple;
    if (!o.exact_normalization) return w;
    return w / (1.0 + std::exp(-o.x0 * o.x0 / (o.xi * o.xi)));
  }

  double operator()(const CompassInterferenceOracle& o) const {
    const auto& c = o.compass;
    return gaussian_wigner(x, p, 0.0, 0.0, c.xi, o.hbar) *
           (std::cos(p * c.L / o.hbar) + std::cos(x * c.P / o.hbar));
  }
};

}  // namespace

double analytic_wigner(const WignerOracle& oracle, double x, double p) { return std::visit(OracleEval{x, p}, oracle); }

double compass_interference_product_form(const CompassInterferenceOracle& o, double x, double p) {
  const auto& c = o.compass;
  const double s = (c.P * x + c.L * p) / (2.0 * o.hbar);
  const double d = (c.P * x - c.L * p) / (2.0 * o.hbar);
  return gaussian_wigner(x, p, 0.0, 0.0, c.xi, o.hbar) * 2.0 * std::cos(s) * std::cos(d);
}

}  // namespace subplanck
