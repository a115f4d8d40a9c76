#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "dadprune/volume.hpp"

namespace dadprune {

// DDT1 binary tensor layout, all integers little-endian:
//
//   offset 0   4 bytes  magic "DDT1"
//   offset 4   1 byte   dtype: 0 = uint8 mask, 1 = float32
//   offset 5   1 byte   ndim: 2 or 3
//   offset 6   ndim x uint32 dims (width, height[, depth])
//   then       product(dims) x dtype-size bytes of voxel data, x fastest
//
// Nothing may follow the payload.

namespace ddt1 {
inline constexpr std::uint8_t kDtypeMask = 0;
inline constexpr std::uint8_t kDtypeFloat32 = 1;
inline constexpr std::size_t kPrefixSize = 6;

inline std::size_t header_size(std::uint8_t ndim) { return kPrefixSize + 4u * ndim; }
}  // namespace ddt1

using AnyVolume = std::variant<MaskVolume, ProbabilityVolume>;

std::vector<std::uint8_t> encode_volume(const MaskVolume& volume);
std::vector<std::uint8_t> encode_volume(const ProbabilityVolume& volume);
std::vector<std::uint8_t> encode_volume(const RealVolume& volume);

/// Masks and probability volumes, with the value checks of each type. Every
/// corruption yields an Error carrying the byte offset it was found at.
AnyVolume decode_volume(std::span<const std::uint8_t> bytes);

/// float32 payload with any finite values (saliency maps).
RealVolume decode_real_volume(std::span<const std::uint8_t> bytes);

AnyVolume read_volume(const std::filesystem::path& path);
RealVolume read_real_volume(const std::filesystem::path& path);

void write_volume(const std::filesystem::path& path, const MaskVolume& volume);
void write_volume(const std::filesystem::path& path, const ProbabilityVolume& volume);
void write_volume(const std::filesystem::path& path, const RealVolume& volume);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace dadprune
