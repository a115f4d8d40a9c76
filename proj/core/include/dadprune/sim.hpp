#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dadprune/trajectory.hpp"
#include "dadprune/volume.hpp"

namespace dadprune {

/// Ensemble-wide simulator constants.
struct SimParams {
  /// Base learning time constant; a sample of difficulty d uses tau0 * (1 + 4d).
  double tau0 = 20.0;
  /// Asymptotic dice is 1 - plateau_gap * d. Zero makes every sample converge
  /// to 1 (the over-fitting regime).
  double plateau_gap = 0.3;
  /// Post-onset Gaussian noise amplitude (eta).
  double noise = 0.02;
  /// Epoch at which learning starts.
  int onset = 10;
  /// Per-sample onset is drawn uniformly from [onset, onset + onset_jitter].
  int onset_jitter = 0;
  /// Before onset, dice is pre_onset_level + pre_onset_noise * xi.
  double pre_onset_level = 0.1;
  double pre_onset_noise = 0.05;
};

/// One simulated sample with planted difficulty.
struct SimSampleSpec {
  std::string sample_id;
  double difficulty = 0.0;  // planted ground truth in [0, 1]
  double plateau = 1.0;     // asymptotic dice
  double tau = 20.0;        // epochs
  double noise = 0.0;
  int onset = 0;
  double pre_onset_level = 0.1;
  double pre_onset_noise = 0.05;
};

SimSampleSpec make_sample_spec(std::string sample_id, double difficulty, int onset, const SimParams& params = {});

/// Throws Errc::invalid_value describing the first out-of-range field.
void validate(const SimSampleSpec& spec);

/// Noise-free dice curve of a spec at `epoch` (pre-onset: the baseline level).
double expected_dice(const SimSampleSpec& spec, int epoch);

/// `n` samples with ids s000, s001, ... and distinct difficulties evenly
/// spaced over [0, 1], assigned to ids in a seed-shuffled order. Onsets are
/// jittered per SimParams.
std::vector<SimSampleSpec> planted_ensemble(std::size_t n, const SimParams& params, std::uint64_t seed);

/// Dice records for epochs 1..epochs, ordered by (epoch, spec order). Each
/// sample draws from its own substream of `seed`, so a sample's trajectory
/// does not depend on which other samples are simulated.
std::vector<ScoreRecord> simulate_trajectories(const std::vector<SimSampleSpec>& specs, int epochs,
                                               std::uint64_t seed);

/// The dice trajectory simulate_trajectories produces for one spec.
std::vector<double> simulate_dice_curve(const SimSampleSpec& spec, int epochs, std::uint64_t seed);

/// Corruption-strength calibration settings.
struct CorruptionParams {
  /// Dilated background voxels per eroded foreground voxel at full strength.
  double dilate_ratio = 0.5;
  /// Fraction of background flipped as salt noise at full strength.
  double salt_rate = 0.02;
  int max_iterations = 30;
  /// Bisection stops once within this distance of the target.
  double tolerance = 0.01;
  /// Largest accepted miss; beyond it the target counts as unattainable.
  double max_error = 0.05;
};

/// A probability volume whose thresholded dice against `truth` is within
/// `max_error` of `target`. Foreground is eroded from the boundary inwards,
/// background dilated outwards, and salt noise sprinkled; a single strength
/// scales all three and is found by bisection. Voxel orderings depend only on
/// `order_seed`; probability jitter only on `value_seed`.
ProbabilityVolume corrupt_to_dice(const MaskVolume& truth, double target, std::uint64_t order_seed,
                                  std::uint64_t value_seed, const CorruptionParams& params = {});

struct MaskSequence {
  std::vector<double> targets;             // per epoch, 1..T
  std::vector<ProbabilityVolume> volumes;  // per epoch, 1..T
};

/// Per-epoch predictions tracking the spec's simulated dice curve.
MaskSequence simulate_mask_sequence(const MaskVolume& truth, const SimSampleSpec& spec, int epochs,
                                    std::uint64_t seed, const CorruptionParams& params = {});

/// Simple synthetic label: an axis-aligned ellipsoid centred in the volume
/// with semi-axes `fraction` of each half-extent.
MaskVolume ellipsoid_mask(Dims dims, double fraction = 0.5);

}  // namespace dadprune
