#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dadprune/trajectory.hpp"

namespace dadprune {

/// Length of the trailing DAD window, in epochs. The window ending at epoch t
/// covers exactly [t - delta_t + 1, t].
class DadWindow {
 public:
  static constexpr int kDefault = 10;

  DadWindow() = default;
  explicit DadWindow(int delta_t);

  int delta_t() const noexcept { return delta_t_; }
  int first_epoch(int t) const noexcept { return t - delta_t_ + 1; }

 private:
  int delta_t_ = kDefault;
};

/// Mean dice over the window ending at `t`.
double dad_score(const TrajectoryStore& store, const std::string& sample_id, int t,
                 DadWindow window = {});

/// Mean dice over every epoch from the store's first epoch through `horizon`.
double full_horizon_dad(const TrajectoryStore& store, const std::string& sample_id, int horizon);

/// Population standard deviation of dice over the window ending at `t`.
double variability(const TrajectoryStore& store, const std::string& sample_id, int t,
                   DadWindow window = {});

struct DataPoint {
  std::string sample_id;
  double mu = 0.0;     // DAD
  double sigma = 0.0;  // variability

  friend bool operator==(const DataPoint&, const DataPoint&) = default;
};

/// (DAD, variability) of every sample at one epoch; points sorted by id.
struct DynamicsSnapshot {
  int epoch = 0;
  std::vector<DataPoint> points;

  friend bool operator==(const DynamicsSnapshot&, const DynamicsSnapshot&) = default;
};

DynamicsSnapshot snapshot(const TrajectoryStore& store, int t, DadWindow window = {});

enum class DistanceMode {
  absolute,  // sum of |dmu| + |dsigma|
  signed_sum,  // sum of dmu + dsigma, as literally printed; may cancel or go negative
};

/// Moving distance between consecutive snapshots over the same sample set.
double moving_distance(const DynamicsSnapshot& prev, const DynamicsSnapshot& curr,
                       DistanceMode mode = DistanceMode::absolute);

struct StopDecision {
  bool stop = false;
  double l_max = 0.0;
  double current = 0.0;
  /// current / l_max; 0 when l_max is 0.
  double ratio = 0.0;
};

/// Fraction of the running maximum below which the curve counts as settled.
inline constexpr double kStopFraction = 0.01;

/// Stop once the newest L falls below 1% of the largest L seen so far. A
/// single observation never stops.
StopDecision should_stop(std::span<const double> history);

/// |a ∩ b| / |a| for two equal-size id sets.
double subset_overlap(const std::vector<std::string>& a, const std::vector<std::string>& b);

struct LCurvePoint {
  int epoch = 0;
  double distance = 0.0;

  friend bool operator==(const LCurvePoint&, const LCurvePoint&) = default;
};

/// Streaming form of the stop rule: feed snapshots at the chosen cadence and
/// get a decision back from the second one on.
class StopMonitor {
 public:
  explicit StopMonitor(DistanceMode mode = DistanceMode::absolute) : mode_(mode) {}

  /// nullopt for the first snapshot (nothing to compare against).
  std::optional<StopDecision> observe(DynamicsSnapshot snap);

  const std::vector<LCurvePoint>& curve() const noexcept { return curve_; }
  std::optional<int> stop_epoch() const noexcept { return stop_epoch_; }

 private:
  DistanceMode mode_;
  std::optional<DynamicsSnapshot> prev_;
  std::vector<LCurvePoint> curve_;
  std::vector<double> history_;
  std::optional<int> stop_epoch_;
};

struct LCurve {
  std::vector<LCurvePoint> points;
  /// First epoch at which should_stop fired, if any.
  std::optional<int> stop_epoch;
};

/// Snapshots at epochs first + delta_t - 1, then every `cadence` epochs
/// (defaults to delta_t, i.e. back-to-back windows). One L point per snapshot
/// after the first.
LCurve moving_distance_curve(const TrajectoryStore& store, DadWindow window = {},
                             std::optional<int> cadence = std::nullopt,
                             DistanceMode mode = DistanceMode::absolute);

/// First index at which should_stop fires on the growing prefix of `curve`.
std::optional<std::size_t> find_stop_index(const std::vector<LCurvePoint>& curve);

}  // namespace dadprune
