#pragma once

// Shared helpers for the unit and acceptance suites: independent brute-force
// oracles, random volume generators, a minimal XML well-formedness check and
// a scratch directory.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dadprune/error.hpp"
#include "dadprune/volume.hpp"

namespace dadprune::testing {

// ---- oracles -------------------------------------------------------------
// These walk voxels by (z, y, x) coordinates, compute their own linear index
// and accumulate in long double. They share nothing with the metric kernels
// beyond the volume accessors.

inline std::size_t oracle_index(const Dims& d, std::size_t x, std::size_t y, std::size_t z) {
  return (z * d.height + y) * d.width + x;
}

template <typename F>
void oracle_for_each_voxel(const Dims& d, F&& fn) {
  for (std::size_t z = 0; z < d.depth; ++z)
    for (std::size_t y = 0; y < d.height; ++y)
      for (std::size_t x = 0; x < d.width; ++x) fn(oracle_index(d, x, y, z));
}

inline double oracle_dice(const MaskVolume& pred, const MaskVolume& truth) {
  long double inter = 0, sp = 0, st = 0;
  oracle_for_each_voxel(truth.dims(), [&](std::size_t i) {
    const bool p = pred.data()[i] == 1;
    const bool t = truth.data()[i] == 1;
    if (p && t) inter += 1;
    if (p) sp += 1;
    if (t) st += 1;
  });
  if (sp + st == 0) return 1.0;
  return static_cast<double>(2 * inter / (sp + st));
}

inline double oracle_thresholded_dice(const ProbabilityVolume& pred, const MaskVolume& truth) {
  long double inter = 0, sp = 0, st = 0;
  oracle_for_each_voxel(truth.dims(), [&](std::size_t i) {
    const bool p = !(pred.data()[i] < 0.5f);
    const bool t = truth.data()[i] == 1;
    if (p && t) inter += 1;
    if (p) sp += 1;
    if (t) st += 1;
  });
  if (sp + st == 0) return 1.0;
  return static_cast<double>(2 * inter / (sp + st));
}

/// sqrt(sum (p - y)^2 / N) over all voxels.
inline double oracle_whole_l2(const ProbabilityVolume& pred, const MaskVolume& truth) {
  long double sum = 0, count = 0;
  oracle_for_each_voxel(truth.dims(), [&](std::size_t i) {
    const long double diff = static_cast<long double>(pred.data()[i]) - truth.data()[i];
    sum += diff * diff;
    count += 1;
  });
  return static_cast<double>(std::sqrt(sum / count));
}

/// sqrt(sum (p - 1)^2 / F) over foreground voxels; NaN without foreground.
inline double oracle_foreground_l2(const ProbabilityVolume& pred, const MaskVolume& truth) {
  long double sum = 0, count = 0;
  oracle_for_each_voxel(truth.dims(), [&](std::size_t i) {
    if (truth.data()[i] != 1) return;
    const long double diff = static_cast<long double>(pred.data()[i]) - 1.0L;
    sum += diff * diff;
    count += 1;
  });
  if (count == 0) return std::nan("");
  return static_cast<double>(std::sqrt(sum / count));
}

/// Mean over voxels of the population variance across the stack, computed
/// as E[x^2] - E[x]^2 per voxel.
inline double oracle_vog(const std::vector<RealVolume>& stack) {
  const Dims& d = stack.front().dims();
  long double total = 0, voxels = 0;
  oracle_for_each_voxel(d, [&](std::size_t i) {
    long double s = 0, s2 = 0;
    for (const auto& v : stack) {
      s += v.data()[i];
      s2 += static_cast<long double>(v.data()[i]) * v.data()[i];
    }
    const long double k = static_cast<long double>(stack.size());
    total += s2 / k - (s / k) * (s / k);
    voxels += 1;
  });
  return static_cast<double>(total / voxels);
}

inline bool close_rel(double a, double b, double rel = 1e-9, double abs_floor = 1e-12) {
  return std::abs(a - b) <= std::max(abs_floor, rel * std::max(std::abs(a), std::abs(b)));
}

// ---- generators ----------------------------------------------------------

inline Dims random_dims(std::mt19937_64& rng, std::uint32_t max_extent) {
  std::uniform_int_distribution<std::uint32_t> ext(1, max_extent);
  return Dims{ext(rng), ext(rng), ext(rng), 3};
}

inline MaskVolume random_mask(std::mt19937_64& rng, Dims d, double p_fg) {
  std::bernoulli_distribution fg(p_fg);
  std::vector<std::uint8_t> data(d.voxel_count());
  for (auto& v : data) v = fg(rng) ? 1 : 0;
  return MaskVolume(d, std::move(data));
}

inline MaskVolume random_mask_with_foreground(std::mt19937_64& rng, Dims d, double p_fg) {
  MaskVolume m = random_mask(rng, d, p_fg);
  if (m.foreground_count() == 0) m.set(std::uniform_int_distribution<std::size_t>(0, m.size() - 1)(rng), true);
  return m;
}

inline ProbabilityVolume random_probs(std::mt19937_64& rng, Dims d) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> data(d.voxel_count());
  for (auto& v : data) v = u(rng);
  return ProbabilityVolume(d, std::move(data));
}

inline RealVolume random_real(std::mt19937_64& rng, Dims d, float scale) {
  std::normal_distribution<float> n(0.0f, scale);
  std::vector<float> data(d.voxel_count());
  for (auto& v : data) v = n(rng);
  return RealVolume(d, std::move(data));
}

// ---- misc ----------------------------------------------------------------

std::string to_hex(const std::vector<std::uint8_t>& bytes);
std::string to_hex(std::string_view text);
/// Reads a golden hex file, ignoring whitespace and '#' comment lines.
std::string read_golden_hex(const std::string& name);

/// Checks tag balance, attribute quoting and entity syntax. Returns an empty
/// string when well-formed, otherwise a description of the first problem.
std::string xml_wellformed_error(std::string_view doc);

/// Count of `needle` occurrences in `haystack`.
std::size_t count_occurrences(std::string_view haystack, std::string_view needle);

/// One malformed DDT1 byte string and the error it must produce.
struct CorruptionCase {
  std::string name;
  std::vector<std::uint8_t> bytes;
  Errc expected;
  std::size_t offset;
};

/// One case per DDT1 corruption class, built from valid encodings.
std::vector<CorruptionCase> ddt1_corruption_cases();

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace dadprune::testing
