#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dadprune/dynamics.hpp"

namespace dadprune {

inline constexpr std::string_view kEngineVersion = "0.1.0";

struct RankEntry {
  std::string sample_id;
  double score = 0.0;

  friend bool operator==(const RankEntry&, const RankEntry&) = default;
};

/// True for metrics where a larger score means the sample was learned more
/// easily (dice-based: "dad", "dice"). Loss-like metrics (el2n, el2nx, vog,
/// naive_l2) are the opposite. This is the single place that decides what
/// "hard" means for a metric.
bool higher_is_easier(std::string_view metric);

/// Samples in ascending score order, ties broken by id.
struct Ranking {
  std::vector<RankEntry> entries;
  int scoring_epoch = 0;
  std::string metric = "dad";

  std::size_t size() const noexcept { return entries.size(); }

  friend bool operator==(const Ranking&, const Ranking&) = default;
};

/// Ranks by the snapshot's DAD (mu).
Ranking rank(const DynamicsSnapshot& snap);

/// Ranks arbitrary per-sample scores. NaN scores and duplicate ids throw.
Ranking rank(std::vector<RankEntry> scores, int scoring_epoch, std::string metric);

enum class Strategy { ambiguous, easy, hard, random };

std::string_view strategy_name(Strategy s);
Strategy parse_strategy(std::string_view name);

struct PruneManifest {
  Strategy strategy = Strategy::ambiguous;
  double fraction_pruned = 0.0;
  int scoring_epoch = 0;
  std::string metric = "dad";
  std::optional<std::uint64_t> seed;
  std::string engine_version{kEngineVersion};
  /// The ranking the decision was made from.
  std::vector<RankEntry> ranking;
  /// Both lists follow ranking order.
  std::vector<std::string> kept;
  std::vector<std::string> dropped;

  friend bool operator==(const PruneManifest&, const PruneManifest&) = default;
};

/// round((1 - p) * n), half-up.
std::size_t kept_count(std::size_t n, double fraction_pruned);

/// Samples trimmed from the low end by the ambiguous strategy; the high end
/// takes the remainder, so an odd leftover is dropped from the easy side.
std::size_t ambiguous_low_trim(std::size_t n, double fraction_pruned);

/// Selects the kept subset. `seed` is required for Strategy::random and
/// ignored otherwise.
PruneManifest prune(const Ranking& ranking, Strategy strategy, double fraction_pruned,
                    std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace dadprune
