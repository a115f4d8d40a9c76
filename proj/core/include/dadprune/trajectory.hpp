#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dadprune {

/// One observation: the dice of `sample_id` at `epoch`, plus optional named
/// extra metrics (el2n, el2nx, ...).
struct ScoreRecord {
  std::string sample_id;
  int epoch = 0;
  double dice = 0.0;
  std::map<std::string, double> extras;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

class TrajectoryBuilder;

/// Immutable per-sample score trajectories. Only complete epochs (every known
/// sample has a record) are analysable; partial epochs are kept aside so
/// errors can name what is missing.
class TrajectoryStore {
 public:
  TrajectoryStore() = default;

  /// Builds a store directly from records; throws on duplicates or bad dice.
  static TrajectoryStore from_records(const std::vector<ScoreRecord>& records);

  /// Sorted lexicographically.
  const std::vector<std::string>& sample_ids() const noexcept { return samples_; }
  /// Complete epochs, ascending.
  const std::vector<int>& epochs() const noexcept { return epochs_; }
  /// Epochs seen for some but not all samples, ascending.
  std::vector<int> partial_epochs() const;
  /// Samples lacking a record at a partial epoch; empty if the epoch is
  /// complete or unknown.
  std::vector<std::string> missing_samples(int epoch) const;

  std::size_t sample_count() const noexcept { return samples_.size(); }
  std::size_t epoch_count() const noexcept { return epochs_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  bool has_sample(const std::string& sample_id) const;
  bool has_epoch(int epoch) const;
  /// Dice at a complete epoch, or nullopt.
  std::optional<double> dice(const std::string& sample_id, int epoch) const;
  std::optional<double> metric(const std::string& sample_id, int epoch,
                               const std::string& name) const;
  /// Names of extra metrics present anywhere in the store.
  std::vector<std::string> metric_names() const;

 private:
  friend class TrajectoryBuilder;

  std::optional<std::size_t> sample_index(const std::string& id) const;
  std::optional<std::size_t> epoch_index(int epoch) const;

  std::vector<std::string> samples_;
  std::vector<int> epochs_;
  // Row-major [sample][epoch index].
  std::vector<double> dice_;
  // Same layout; NaN where a record lacks the metric.
  std::map<std::string, std::vector<double>> extras_;
  std::map<int, std::vector<std::string>> partial_;
};

/// Single-writer accumulator. Rejects duplicates as they arrive; partial
/// epochs are resolved at finalize().
class TrajectoryBuilder {
 public:
  /// `line` is the 1-based source line, used in duplicate diagnostics.
  void add(ScoreRecord record, std::size_t line = 0);
  std::size_t record_count() const noexcept { return count_; }
  TrajectoryStore finalize() const;

 private:
  struct Entry {
    double dice;
    std::map<std::string, double> extras;
    std::size_t line;
  };
  std::map<std::string, std::map<int, Entry>> rows_;
  std::size_t count_ = 0;
};

}  // namespace dadprune
