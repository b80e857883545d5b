#include "subplanck/io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "subplanck/error.hpp"

namespace subplanck::io {

namespace {

constexpr char kPsiMagic[] = "PSIGRID1";
constexpr char kRhoMagic[] = "RHOGRID1";
constexpr char kWigMagic[] = "WIGGRID1";

class Writer {
 public:
  explicit Writer(std::size_t reserve) { out_.reserve(reserve); }

  void magic(const char* m) { out_.insert(out_.end(), m, m + 8); }

  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }

  void u64(std::uint64_t v) {
    for (int k = 0; k < 8; ++k) out_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }

  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  void magic(const char* m) {
    need(8, "file too short for magic");
    if (std::memcmp(in_.data(), m, 8) != 0) throw FormatError(std::string("bad magic, expected ") + m, 0);
    pos_ = 8;
  }

  std::uint32_t u32() {
    need(4, "truncated u32");
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(in_[pos_ + k]) << (8 * k);
    pos_ += 4;
    return v;
  }

  std::uint64_t u64() {
    need(8, "truncated u64");
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(in_[pos_ + k]) << (8 * k);
    pos_ += 8;
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }

  void version() {
    const std::size_t at = pos_;
    const std::uint32_t v = u32();
    if (v != kFormatVersion) throw FormatError("unsupported format version " + std::to_string(v), at);
  }

  // Checks the payload size up front so truncation is reported at the
  // offset where data runs out.
  void expect_payload(std::uint64_t count, std::size_t elem) {
    if (count > remaining() / elem) {
      throw FormatError("truncated payload: need " + std::to_string(count) + " values", in_.size());
    }
    if (remaining() != count * elem) throw FormatError("trailing bytes after payload", pos_ + count * elem);
  }

 private:
  void need(std::size_t k, const char* what) {
    if (remaining() < k) throw FormatError(what, in_.size());
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void write_grid_header(Writer& w, const char* magic, const GridSpec& g) {
  w.magic(magic);
  w.u32(kFormatVersion);
  w.u64(g.n());
  w.f64(g.x_min());
  w.f64(g.dx());
  w.f64(g.hbar());
}

GridSpec read_grid_header(Reader& r, const char* magic) {
  r.magic(magic);
  r.version();
  const std::size_t at = r.pos();
  const std::uint64_t n = r.u64();
  const double x_min = r.f64();
  const double dx = r.f64();
  const double hbar = r.f64();
  try {
    return GridSpec(static_cast<std::size_t>(n), x_min, dx, hbar);
  } catch (const DomainError& e) {
    throw FormatError(std::string("invalid grid header: ") + e.what(), at);
  }
}

}  // namespace

Bytes encode(const WaveFunction& psi) {
  Writer w(44 + 16 * psi.size());
  write_grid_header(w, kPsiMagic, psi.grid());
  for (const auto& a : psi.amplitudes()) {
    w.f64(a.real());
    w.f64(a.imag());
  }
  return w.take();
}

Bytes encode(const DensityMatrix& rho) {
  Writer w(44 + 16 * rho.data().size());
  write_grid_header(w, kRhoMagic, rho.grid());
  for (const auto& a : rho.data()) {
    w.f64(a.real());
    w.f64(a.imag());
  }
  return w.take();
}

Bytes encode(const WignerGrid& g) {
  Writer w(68 + 8 * g.values().size());
  w.magic(kWigMagic);
  w.u32(kFormatVersion);
  w.u64(g.n_x());
  w.u64(g.n_p());
  w.f64(g.x_min());
  w.f64(g.dx());
  w.f64(g.p_min());
  w.f64(g.dp());
  w.f64(g.hbar());
  for (double v : g.values()) w.f64(v);
  return w.take();
}

WaveFunction decode_psi(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const GridSpec g = read_grid_header(r, kPsiMagic);
  r.expect_payload(g.n(), 16);
  std::vector<cplx> amp(g.n());
  for (auto& a : amp) {
    const double re = r.f64();
    const double im = r.f64();
    a = {re, im};
  }
  return WaveFunction(g, std::move(amp));
}

DensityMatrix decode_rho(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const GridSpec g = read_grid_header(r, kRhoMagic);
  r.expect_payload(static_cast<std::uint64_t>(g.n()) * g.n(), 16);
  std::vector<cplx> rho(g.n() * g.n());
  for (auto& a : rho) {
    const double re = r.f64();
    const double im = r.f64();
    a = {re, im};
  }
  return DensityMatrix(g, std::move(rho));
}

WignerGrid decode_wigner(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.magic(kWigMagic);
  r.version();
  const std::size_t at = r.pos();
  const std::uint64_t n_x = r.u64();
  const std::uint64_t n_p = r.u64();
  const double x_min = r.f64();
  const double dx = r.f64();
  const double p_min = r.f64();
  const double dp = r.f64();
  const double hbar = r.f64();
  if (n_x == 0 || n_p == 0 || n_x > (std::uint64_t{1} << 32) || n_p > (std::uint64_t{1} << 32)) {
    throw FormatError("invalid Wigner grid shape", at);
  }
  r.expect_payload(n_x * n_p, 8);
  std::vector<double> values(n_x * n_p);
  for (auto& v : values) v = r.f64();
  try {
    return WignerGrid(hbar, x_min, dx, n_x, p_min, dp, n_p, std::move(values));
  } catch (const Error& e) {
    throw FormatError(std::string("invalid Wigner header: ") + e.what(), at);
  }
}

std::string magic_of(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) return {};
  return std::string(bytes.begin(), bytes.begin() + 8);
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed on " + path.string());
  return data;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed on " + path.string());
}

std::string overlap_csv(std::span<const OverlapSample> curve) {
  std::string out = "delta_x,delta_p,overlap_abs,overlap_re,overlap_im\n";
  char buf[160];
  for (const auto& s : curve) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.delta_x, s.delta_p, std::abs(s.z), s.z.real(),
                  s.z.imag());
    out += buf;
  }
  return out;
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace subplanck::io
