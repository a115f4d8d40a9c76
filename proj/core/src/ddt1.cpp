#include "dadprune/ddt1.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "dadprune/error.hpp"

namespace dadprune {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[at + i]) << (8 * i);
  return v;
}

std::vector<std::uint8_t> encode_header(std::uint8_t dtype, const Dims& dims, std::size_t payload) {
  std::vector<std::uint8_t> out;
  out.reserve(ddt1::header_size(dims.rank) + payload);
  for (char c : {'D', 'D', 'T', '1'}) out.push_back(static_cast<std::uint8_t>(c));
  out.push_back(dtype);
  out.push_back(dims.rank);
  put_u32(out, dims.width);
  put_u32(out, dims.height);
  if (dims.rank == 3) put_u32(out, dims.depth);
  return out;
}

std::vector<std::uint8_t> encode_floats(const Dims& dims, const std::vector<float>& data) {
  auto out = encode_header(ddt1::kDtypeFloat32, dims, data.size() * 4);
  for (float f : data) put_u32(out, std::bit_cast<std::uint32_t>(f));
  return out;
}

struct Header {
  std::uint8_t dtype;
  Dims dims;
  std::size_t payload_offset;
};

Header decode_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < ddt1::kPrefixSize) {
    throw Error(Errc::truncated_header,
                "file is " + std::to_string(bytes.size()) + " bytes, shorter than the 6-byte prefix",
                bytes.size());
  }
  if (std::memcmp(bytes.data(), "DDT1", 4) != 0) {
    throw Error(Errc::bad_magic, "magic is not \"DDT1\"", 0);
  }
  const std::uint8_t dtype = bytes[4];
  if (dtype != ddt1::kDtypeMask && dtype != ddt1::kDtypeFloat32) {
    throw Error(Errc::bad_dtype, "unknown dtype byte " + std::to_string(dtype), 4);
  }
  const std::uint8_t ndim = bytes[5];
  if (ndim != 2 && ndim != 3) {
    throw Error(Errc::bad_ndim, "ndim must be 2 or 3, got " + std::to_string(ndim), 5);
  }
  const std::size_t header = ddt1::header_size(ndim);
  if (bytes.size() < header) {
    throw Error(Errc::truncated_header,
                "header needs " + std::to_string(header) + " bytes, file has " +
                    std::to_string(bytes.size()),
                bytes.size());
  }
  std::uint32_t d[3] = {1, 1, 1};
  std::uint64_t voxels = 1;
  for (std::size_t i = 0; i < ndim; ++i) {
    const std::size_t at = ddt1::kPrefixSize + 4 * i;
    d[i] = get_u32(bytes, at);
    if (d[i] == 0) throw Error(Errc::zero_dim, "dimension " + std::to_string(i) + " is zero", at);
    if (voxels > std::numeric_limits<std::uint64_t>::max() / d[i]) {
      throw Error(Errc::dims_overflow, "voxel count overflows 64 bits", at);
    }
    voxels *= d[i];
  }
  const std::uint64_t elem = dtype == ddt1::kDtypeMask ? 1 : 4;
  if (voxels > std::numeric_limits<std::uint64_t>::max() / elem ||
      voxels * elem > std::numeric_limits<std::size_t>::max() - header) {
    throw Error(Errc::dims_overflow, "payload size overflows", ddt1::kPrefixSize);
  }
  const std::size_t expected = static_cast<std::size_t>(voxels * elem);
  const std::size_t available = bytes.size() - header;
  if (available < expected) {
    throw Error(Errc::truncated_payload,
                "payload needs " + std::to_string(expected) + " bytes, found " + std::to_string(available),
                bytes.size());
  }
  if (available > expected) {
    throw Error(Errc::trailing_bytes,
                std::to_string(available - expected) + " unexpected bytes after the payload",
                header + expected);
  }
  return {dtype, Dims{d[0], d[1], d[2], ndim}, header};
}

std::vector<float> decode_floats(std::span<const std::uint8_t> bytes, const Header& h,
                                 bool unit_range) {
  const std::size_t n = h.dims.voxel_count();
  std::vector<float> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t at = h.payload_offset + 4 * i;
    const float v = std::bit_cast<float>(get_u32(bytes, at));
    if (!std::isfinite(v)) {
      throw Error(Errc::bad_float_value, "non-finite value at voxel " + std::to_string(i), at);
    }
    if (unit_range && !(v >= 0.0f && v <= 1.0f)) {
      throw Error(Errc::bad_float_value,
                  "probability " + std::to_string(v) + " at voxel " + std::to_string(i) +
                      " is outside [0, 1]",
                  at);
    }
    data[i] = v;
  }
  return data;
}

}  // namespace

std::vector<std::uint8_t> encode_volume(const MaskVolume& volume) {
  auto out = encode_header(ddt1::kDtypeMask, volume.dims(), volume.size());
  out.insert(out.end(), volume.data().begin(), volume.data().end());
  return out;
}

std::vector<std::uint8_t> encode_volume(const ProbabilityVolume& volume) {
  return encode_floats(volume.dims(), volume.data());
}

std::vector<std::uint8_t> encode_volume(const RealVolume& volume) {
  return encode_floats(volume.dims(), volume.data());
}

AnyVolume decode_volume(std::span<const std::uint8_t> bytes) {
  const Header h = decode_header(bytes);
  if (h.dtype == ddt1::kDtypeMask) {
    auto payload = bytes.subspan(h.payload_offset);
    for (std::size_t i = 0; i < payload.size(); ++i) {
      if (payload[i] > 1) {
        throw Error(Errc::bad_mask_byte,
                    "mask byte " + std::to_string(payload[i]) + " at voxel " + std::to_string(i),
                    h.payload_offset + i);
      }
    }
    return MaskVolume(h.dims, std::vector<std::uint8_t>(payload.begin(), payload.end()));
  }
  return ProbabilityVolume(h.dims, decode_floats(bytes, h, true));
}

RealVolume decode_real_volume(std::span<const std::uint8_t> bytes) {
  const Header h = decode_header(bytes);
  if (h.dtype != ddt1::kDtypeFloat32) {
    throw Error(Errc::bad_dtype, "expected a float32 volume", 4);
  }
  return RealVolume(h.dims, decode_floats(bytes, h, false));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open '" + path.string() + "'");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io_failure, "write to '" + path.string() + "' failed");
}

namespace {

template <typename F>
auto with_path(const std::filesystem::path& path, F&& decode) {
  const auto bytes = read_file_bytes(path);
  try {
    return decode(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message(), e.byte_offset());
  }
}

}  // namespace

AnyVolume read_volume(const std::filesystem::path& path) {
  return with_path(path, [](const auto& b) { return decode_volume(b); });
}

RealVolume read_real_volume(const std::filesystem::path& path) {
  return with_path(path, [](const auto& b) { return decode_real_volume(b); });
}

void write_volume(const std::filesystem::path& path, const MaskVolume& volume) {
  write_file_bytes(path, encode_volume(volume));
}

void write_volume(const std::filesystem::path& path, const ProbabilityVolume& volume) {
  write_file_bytes(path, encode_volume(volume));
}

void write_volume(const std::filesystem::path& path, const RealVolume& volume) {
  write_file_bytes(path, encode_volume(volume));
}

}  // namespace dadprune
