#include "dadprune/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dadprune/error.hpp"
#include "dadprune/random.hpp"

namespace dadprune {

namespace {

// Absorbs representation error in products like (1 - 0.7) * 10 so that the
// half-up and floor rules act on the intended decimal value.
constexpr double kRoundingSlack = 1e-9;

void require_fraction(double p) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw Error(Errc::out_of_range, "pruning fraction must be in [0, 1), got " + std::to_string(p));
  }
}

}  // namespace

bool higher_is_easier(std::string_view metric) { return metric == "dad" || metric == "dice"; }

Ranking rank(const DynamicsSnapshot& snap) {
  std::vector<RankEntry> scores;
  scores.reserve(snap.points.size());
  for (const auto& p : snap.points) scores.push_back({p.sample_id, p.mu});
  return rank(std::move(scores), snap.epoch, "dad");
}

Ranking rank(std::vector<RankEntry> scores, int scoring_epoch, std::string metric) {
  if (scores.empty()) throw Error(Errc::empty_input, "cannot rank an empty sample set");
  for (const auto& e : scores) {
    if (std::isnan(e.score)) {
      throw Error(Errc::nan_score, "sample '" + e.sample_id + "' has a NaN score");
    }
  }
  std::sort(scores.begin(), scores.end(), [](const RankEntry& a, const RankEntry& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.sample_id < b.sample_id;
  });
  std::vector<std::string> ids;
  ids.reserve(scores.size());
  for (const auto& e : scores) ids.push_back(e.sample_id);
  std::sort(ids.begin(), ids.end());
  if (auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end()) {
    throw Error(Errc::duplicate_record, "sample '" + *dup + "' ranked twice");
  }
  return Ranking{std::move(scores), scoring_epoch, std::move(metric)};
}

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::ambiguous: return "ambiguous";
    case Strategy::easy: return "easy";
    case Strategy::hard: return "hard";
    case Strategy::random: return "random";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::ambiguous, Strategy::easy, Strategy::hard, Strategy::random}) {
    if (strategy_name(s) == name) return s;
  }
  throw Error(Errc::invalid_value, "unknown pruning strategy '" + std::string(name) + "'");
}

std::size_t kept_count(std::size_t n, double fraction_pruned) {
  require_fraction(fraction_pruned);
  const double exact = (1.0 - fraction_pruned) * static_cast<double>(n);
  return std::min(n, static_cast<std::size_t>(std::floor(exact + 0.5 + kRoundingSlack)));
}

std::size_t ambiguous_low_trim(std::size_t n, double fraction_pruned) {
  const std::size_t dropped = n - kept_count(n, fraction_pruned);
  const double half = fraction_pruned * static_cast<double>(n) / 2.0;
  return std::min(dropped, static_cast<std::size_t>(std::floor(half + kRoundingSlack)));
}

PruneManifest prune(const Ranking& ranking, Strategy strategy, double fraction_pruned,
                    std::optional<std::uint64_t> seed) {
  require_fraction(fraction_pruned);
  const std::size_t n = ranking.size();
  if (n == 0) throw Error(Errc::empty_input, "cannot prune an empty ranking");
  const std::size_t keep = kept_count(n, fraction_pruned);
  if (keep == 0) {
    throw Error(Errc::empty_subset, "pruning " + std::to_string(fraction_pruned) + " of " +
                                        std::to_string(n) + " samples leaves nothing");
  }

  // Positions into ranking.entries (ascending score). Orientation decides
  // which end of the order is the hard one.
  const bool low_is_hard = higher_is_easier(ranking.metric);
  std::vector<bool> keep_mask(n, false);
  auto keep_range = [&](std::size_t first, std::size_t count) {
    for (std::size_t i = first; i < first + count; ++i) keep_mask[i] = true;
  };

  switch (strategy) {
    case Strategy::hard:
      keep_range(low_is_hard ? 0 : n - keep, keep);
      break;
    case Strategy::easy:
      keep_range(low_is_hard ? n - keep : 0, keep);
      break;
    case Strategy::ambiguous: {
      const std::size_t hard_trim = ambiguous_low_trim(n, fraction_pruned);
      const std::size_t easy_trim = n - keep - hard_trim;
      keep_range(low_is_hard ? hard_trim : easy_trim, keep);
      break;
    }
    case Strategy::random: {
      if (!seed) throw Error(Errc::invalid_value, "random strategy needs a seed");
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), std::size_t{0});
      Rng rng(*seed);
      for (std::size_t i = n - 1; i > 0; --i) {
        std::swap(order[i], order[rng.below(i + 1)]);
      }
      for (std::size_t i = 0; i < keep; ++i) keep_mask[order[i]] = true;
      break;
    }
  }

  PruneManifest m;
  m.strategy = strategy;
  m.fraction_pruned = fraction_pruned;
  m.scoring_epoch = ranking.scoring_epoch;
  m.metric = ranking.metric;
  if (strategy == Strategy::random) m.seed = seed;
  m.ranking = ranking.entries;
  for (std::size_t i = 0; i < n; ++i) {
    (keep_mask[i] ? m.kept : m.dropped).push_back(ranking.entries[i].sample_id);
  }
  return m;
}

}  // namespace dadprune
