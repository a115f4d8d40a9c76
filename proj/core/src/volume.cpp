#include "dadprune/volume.hpp"

#include <algorithm>
#include <cmath>

#include "dadprune/error.hpp"

namespace dadprune {

std::string Dims::str() const {
  std::string out = std::to_string(width) + "x" + std::to_string(height);
  if (rank == 3) out += "x" + std::to_string(depth);
  return out;
}

bool same_extent(const Dims& a, const Dims& b) noexcept {
  return a.width == b.width && a.height == b.height && a.depth == b.depth;
}

namespace {

void check_dims(const Dims& dims, std::size_t data_len) {
  if (dims.width == 0 || dims.height == 0 || dims.depth == 0) {
    throw Error(Errc::invalid_value, "volume dims must be positive, got " + dims.str());
  }
  if (dims.rank != 2 && dims.rank != 3) {
    throw Error(Errc::invalid_value, "volume rank must be 2 or 3");
  }
  if (dims.rank == 2 && dims.depth != 1) {
    throw Error(Errc::invalid_value, "2-D volume must have depth 1");
  }
  if (data_len != dims.voxel_count()) {
    throw Error(Errc::shape_mismatch,
                "data length " + std::to_string(data_len) + " does not match dims " +
                    dims.str() + " (" + std::to_string(dims.voxel_count()) + " voxels)");
  }
}

}  // namespace

MaskVolume::MaskVolume(Dims dims, std::vector<std::uint8_t> data)
    : dims_(dims), data_(std::move(data)) {
  check_dims(dims_, data_.size());
  auto bad = std::find_if(data_.begin(), data_.end(), [](std::uint8_t v) { return v > 1; });
  if (bad != data_.end()) {
    throw Error(Errc::invalid_value,
                "mask value " + std::to_string(*bad) + " at voxel " +
                    std::to_string(bad - data_.begin()) + " is not 0 or 1");
  }
}

MaskVolume::MaskVolume(Dims dims) : MaskVolume(dims, std::vector<std::uint8_t>(dims.voxel_count(), 0)) {}

std::size_t MaskVolume::foreground_count() const noexcept {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

ProbabilityVolume::ProbabilityVolume(Dims dims, std::vector<float> data)
    : dims_(dims), data_(std::move(data)) {
  check_dims(dims_, data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const float v = data_[i];
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw Error(Errc::invalid_value,
                  "probability at voxel " + std::to_string(i) + " is outside [0, 1]");
    }
  }
}

ProbabilityVolume ProbabilityVolume::from_mask(const MaskVolume& mask) {
  std::vector<float> data(mask.size());
  std::transform(mask.data().begin(), mask.data().end(), data.begin(),
                 [](std::uint8_t v) { return v ? 1.0f : 0.0f; });
  return ProbabilityVolume(mask.dims(), std::move(data));
}

RealVolume::RealVolume(Dims dims, std::vector<float> data)
    : dims_(dims), data_(std::move(data)) {
  check_dims(dims_, data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw Error(Errc::invalid_value, "non-finite value at voxel " + std::to_string(i));
    }
  }
}

SaliencyStack::SaliencyStack(std::vector<int> epochs, std::vector<RealVolume> volumes)
    : epochs_(std::move(epochs)), volumes_(std::move(volumes)) {
  if (volumes_.size() < 2) {
    throw Error(Errc::insufficient_data,
                "saliency stack needs at least 2 volumes, got " + std::to_string(volumes_.size()));
  }
  if (epochs_.size() != volumes_.size()) {
    throw Error(Errc::size_mismatch, "saliency stack has " + std::to_string(epochs_.size()) +
                                         " epochs for " + std::to_string(volumes_.size()) +
                                         " volumes");
  }
  for (std::size_t i = 1; i < volumes_.size(); ++i) {
    if (!same_extent(volumes_[i].dims(), volumes_[0].dims())) {
      throw Error(Errc::shape_mismatch, "saliency volume " + std::to_string(i) + " has dims " +
                                            volumes_[i].dims().str() + ", expected " +
                                            volumes_[0].dims().str());
    }
    if (epochs_[i] <= epochs_[i - 1]) {
      throw Error(Errc::invalid_value, "saliency epochs must be strictly increasing");
    }
  }
}

MaskVolume threshold(const ProbabilityVolume& probs) {
  std::vector<std::uint8_t> out(probs.size());
  std::transform(probs.data().begin(), probs.data().end(), out.begin(),
                 [](float p) -> std::uint8_t { return p >= 0.5f ? 1 : 0; });
  return MaskVolume(probs.dims(), std::move(out));
}

}  // namespace dadprune
