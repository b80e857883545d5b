#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "subplanck/grid.hpp"
#include "subplanck/wigner.hpp"

namespace subplanck::io {

using Bytes = std::vector<std::uint8_t>;

/// Binary layouts, all little-endian regardless of host:
///   PSIGRID1: magic, u32 version=1, u64 n, f64 x_min, f64 dx, f64 hbar,
///             n x (f64 re, f64 im)
///   RHOGRID1: same header, n*n row-major complex entries
///   WIGGRID1: magic, u32 version=1, u64 n_x, u64 n_p, f64 x_min, dx, p_min,
///             dp, hbar, n_x*n_p f64 values (x-major)
/// Decoders throw FormatError carrying the byte offset of the first bad field.
inline constexpr std::uint32_t kFormatVersion = 1;

Bytes encode(const WaveFunction& psi);
Bytes encode(const DensityMatrix& rho);
Bytes encode(const WignerGrid& w);

WaveFunction decode_psi(std::span<const std::uint8_t> bytes);
DensityMatrix decode_rho(std::span<const std::uint8_t> bytes);
WignerGrid decode_wigner(std::span<const std::uint8_t> bytes);

/// First eight bytes of a buffer, for dispatching on file type.
std::string magic_of(std::span<const std::uint8_t> bytes);

/// Whole-file helpers; throw IoError when the file system fails.
Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

inline WaveFunction load_psi(const std::filesystem::path& p) { return decode_psi(read_file(p)); }
inline DensityMatrix load_rho(const std::filesystem::path& p) { return decode_rho(read_file(p)); }
inline WignerGrid load_wigner(const std::filesystem::path& p) { return decode_wigner(read_file(p)); }

/// Decay curve with header delta_x,delta_p,overlap_abs,overlap_re,overlap_im
/// and every value printed with 17 significant digits.
std::string overlap_csv(std::span<const OverlapSample> curve);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace subplanck::io
