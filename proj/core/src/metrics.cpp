#include "dadprune/metrics.hpp"

#include <cmath>

#include "dadprune/error.hpp"

namespace dadprune {

namespace {

void require_same_extent(const Dims& pred, const Dims& truth) {
  if (!same_extent(pred, truth)) {
    throw Error(Errc::shape_mismatch,
                "prediction dims " + pred.str() + " do not match truth dims " + truth.str());
  }
}

double normalized_l2(const ProbabilityVolume& pred, const MaskVolume& truth) {
  require_same_extent(pred.dims(), truth.dims());
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double diff = static_cast<double>(pred[i]) - static_cast<double>(truth[i]);
    sum_sq += diff * diff;
  }
  return std::sqrt(sum_sq) / std::sqrt(static_cast<double>(pred.size()));
}

}  // namespace

double dice(const MaskVolume& pred, const MaskVolume& truth) {
  require_same_extent(pred.dims(), truth.dims());
  std::size_t both = 0;
  std::size_t pred_count = 0;
  std::size_t truth_count = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const std::uint8_t p = pred[i];
    const std::uint8_t t = truth[i];
    both += p & t;
    pred_count += p;
    truth_count += t;
  }
  if (pred_count + truth_count == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(pred_count + truth_count);
}

double dice(const ProbabilityVolume& pred, const MaskVolume& truth) {
  require_same_extent(pred.dims(), truth.dims());
  return dice(threshold(pred), truth);
}

double naive_l2_score(const ProbabilityVolume& pred, const MaskVolume& truth) {
  return normalized_l2(pred, truth);
}

double el2n(const ProbabilityVolume& pred, const MaskVolume& truth) {
  return normalized_l2(pred, truth);
}

double el2nx(const ProbabilityVolume& pred, const MaskVolume& truth) {
  require_same_extent(pred.dims(), truth.dims());
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (truth[i] == 0) continue;
    const double diff = static_cast<double>(pred[i]) - 1.0;
    sum_sq += diff * diff;
    ++count;
  }
  if (count == 0) {
    throw Error(Errc::no_foreground, "el2nx needs at least one foreground voxel in the label");
  }
  return std::sqrt(sum_sq) / std::sqrt(static_cast<double>(count));
}

double vog(const SaliencyStack& saliency) {
  const auto& volumes = saliency.volumes();
  const std::size_t voxels = volumes.front().size();
  const double k = static_cast<double>(volumes.size());
  double total = 0.0;
  for (std::size_t i = 0; i < voxels; ++i) {
    double mean = 0.0;
    for (const auto& v : volumes) mean += v[i];
    mean /= k;
    double var = 0.0;
    for (const auto& v : volumes) {
      const double d = static_cast<double>(v[i]) - mean;
      var += d * d;
    }
    total += var / k;
  }
  return total / static_cast<double>(voxels);
}

}  // namespace dadprune
