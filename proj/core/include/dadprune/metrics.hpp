#pragma once

#include "dadprune/volume.hpp"

namespace dadprune {

// Per-sample difficulty metrics. All functions are pure and accumulate in
// linear voxel order, so results are bit-reproducible for a given input.

/// 2|P ∩ T| / (|P| + |T|). Both masks empty gives 1.0.
double dice(const MaskVolume& pred, const MaskVolume& truth);

/// Dice of the thresholded prediction (see `threshold`).
double dice(const ProbabilityVolume& pred, const MaskVolume& truth);

/// Whole-volume L2 error of the prediction, normalized by sqrt(voxel count).
/// This is the background-dominated baseline score.
double naive_l2_score(const ProbabilityVolume& pred, const MaskVolume& truth);

/// EL2N: ||p - y||_2 over every voxel, normalized by sqrt(voxel count).
double el2n(const ProbabilityVolume& pred, const MaskVolume& truth);

/// EL2Nx: ||p - y||_2 over foreground voxels of `truth` only, normalized by
/// sqrt(foreground count). Throws Errc::no_foreground on an empty label.
double el2nx(const ProbabilityVolume& pred, const MaskVolume& truth);

/// Variance of gradients: per-voxel population variance across the stack,
/// averaged over voxels. Dataset-level normalization is left to the caller.
double vog(const SaliencyStack& saliency);

}  // namespace dadprune
