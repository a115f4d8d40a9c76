#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dadprune {

/// Voxel extents. 2-D volumes have depth 1 and rank 2; the rank is kept only
/// so a 2-D file round-trips through DDT1 unchanged. Linear voxel index is
/// x + width * (y + height * z).
struct Dims {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t depth = 1;
  std::uint8_t rank = 3;

  std::size_t voxel_count() const noexcept {
    return static_cast<std::size_t>(width) * height * depth;
  }
  std::string str() const;

  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Extent equality; rank is ignored.
bool same_extent(const Dims& a, const Dims& b) noexcept;

/// Binary label grid, every element 0 or 1.
class MaskVolume {
 public:
  MaskVolume() = default;
  MaskVolume(Dims dims, std::vector<std::uint8_t> data);
  /// All-background volume.
  explicit MaskVolume(Dims dims);

  const Dims& dims() const noexcept { return dims_; }
  const std::vector<std::uint8_t>& data() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::uint8_t operator[](std::size_t i) const { return data_[i]; }
  void set(std::size_t i, bool foreground) { data_[i] = foreground ? 1 : 0; }
  std::size_t foreground_count() const noexcept;

  friend bool operator==(const MaskVolume&, const MaskVolume&) = default;

 private:
  Dims dims_;
  std::vector<std::uint8_t> data_;
};

/// Per-voxel foreground probabilities in [0, 1]. Stored as float32 so DDT1
/// files round-trip bit-exactly.
class ProbabilityVolume {
 public:
  ProbabilityVolume() = default;
  ProbabilityVolume(Dims dims, std::vector<float> data);

  /// Hard 0/1 probabilities from a mask.
  static ProbabilityVolume from_mask(const MaskVolume& mask);

  const Dims& dims() const noexcept { return dims_; }
  const std::vector<float>& data() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }
  float operator[](std::size_t i) const { return data_[i]; }

  friend bool operator==(const ProbabilityVolume&,
                         const ProbabilityVolume&) = default;

 private:
  Dims dims_;
  std::vector<float> data_;
};

/// Unbounded finite real volume (saliency maps).
class RealVolume {
 public:
  RealVolume() = default;
  RealVolume(Dims dims, std::vector<float> data);

  const Dims& dims() const noexcept { return dims_; }
  const std::vector<float>& data() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }
  float operator[](std::size_t i) const { return data_[i]; }

  friend bool operator==(const RealVolume&, const RealVolume&) = default;

 private:
  Dims dims_;
  std::vector<float> data_;
};

/// Per-epoch saliency volumes for one sample: at least two, same extents,
/// strictly increasing epochs.
class SaliencyStack {
 public:
  SaliencyStack(std::vector<int> epochs, std::vector<RealVolume> volumes);

  const std::vector<int>& epochs() const noexcept { return epochs_; }
  const std::vector<RealVolume>& volumes() const noexcept { return volumes_; }

 private:
  std::vector<int> epochs_;
  std::vector<RealVolume> volumes_;
};

/// Thresholds at 0.5; exactly 0.5 maps to foreground.
MaskVolume threshold(const ProbabilityVolume& probs);

}  // namespace dadprune
