#include "dadprune/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "dadprune/error.hpp"

namespace dadprune {

TrajectoryStore TrajectoryStore::from_records(const std::vector<ScoreRecord>& records) {
  TrajectoryBuilder builder;
  for (const auto& r : records) builder.add(r);
  return builder.finalize();
}

std::vector<int> TrajectoryStore::partial_epochs() const {
  std::vector<int> out;
  out.reserve(partial_.size());
  for (const auto& [epoch, missing] : partial_) out.push_back(epoch);
  return out;
}

std::vector<std::string> TrajectoryStore::missing_samples(int epoch) const {
  auto it = partial_.find(epoch);
  return it == partial_.end() ? std::vector<std::string>{} : it->second;
}

bool TrajectoryStore::has_sample(const std::string& sample_id) const {
  return sample_index(sample_id).has_value();
}

bool TrajectoryStore::has_epoch(int epoch) const { return epoch_index(epoch).has_value(); }

std::optional<std::size_t> TrajectoryStore::sample_index(const std::string& id) const {
  auto it = std::lower_bound(samples_.begin(), samples_.end(), id);
  if (it == samples_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - samples_.begin());
}

std::optional<std::size_t> TrajectoryStore::epoch_index(int epoch) const {
  auto it = std::lower_bound(epochs_.begin(), epochs_.end(), epoch);
  if (it == epochs_.end() || *it != epoch) return std::nullopt;
  return static_cast<std::size_t>(it - epochs_.begin());
}

std::optional<double> TrajectoryStore::dice(const std::string& sample_id, int epoch) const {
  auto s = sample_index(sample_id);
  auto e = epoch_index(epoch);
  if (!s || !e) return std::nullopt;
  return dice_[*s * epochs_.size() + *e];
}

std::optional<double> TrajectoryStore::metric(const std::string& sample_id, int epoch,
                                              const std::string& name) const {
  if (name == "dice") return dice(sample_id, epoch);
  auto m = extras_.find(name);
  auto s = sample_index(sample_id);
  auto e = epoch_index(epoch);
  if (m == extras_.end() || !s || !e) return std::nullopt;
  const double v = m->second[*s * epochs_.size() + *e];
  if (std::isnan(v)) return std::nullopt;
  return v;
}

std::vector<std::string> TrajectoryStore::metric_names() const {
  std::vector<std::string> out;
  for (const auto& [name, values] : extras_) out.push_back(name);
  return out;
}

void TrajectoryBuilder::add(ScoreRecord record, std::size_t line) {
  if (record.sample_id.empty()) {
    throw Error(Errc::malformed_record, "empty sample_id (line " + std::to_string(line) + ")");
  }
  if (record.epoch < 0) {
    throw Error(Errc::out_of_range, "negative epoch " + std::to_string(record.epoch) +
                                        " for sample '" + record.sample_id + "'");
  }
  if (!(record.dice >= 0.0 && record.dice <= 1.0)) {
    throw Error(Errc::out_of_range, "dice " + std::to_string(record.dice) + " for sample '" +
                                        record.sample_id + "' at epoch " +
                                        std::to_string(record.epoch) + " is outside [0, 1]" +
                                        (line ? " (line " + std::to_string(line) + ")" : ""));
  }
  for (const auto& [name, value] : record.extras) {
    if (!std::isfinite(value)) {
      throw Error(Errc::invalid_value, "metric '" + name + "' for sample '" + record.sample_id +
                                           "' is not finite");
    }
  }
  auto& row = rows_[record.sample_id];
  auto [it, inserted] =
      row.try_emplace(record.epoch, Entry{record.dice, std::move(record.extras), line});
  if (!inserted) {
    throw Error(Errc::duplicate_record,
                "duplicate record for sample '" + record.sample_id + "' at epoch " +
                    std::to_string(record.epoch) + " (lines " + std::to_string(it->second.line) +
                    " and " + std::to_string(line) + ")");
  }
  ++count_;
}

TrajectoryStore TrajectoryBuilder::finalize() const {
  TrajectoryStore store;
  std::set<int> all_epochs;
  std::set<std::string> metric_names;
  for (const auto& [id, row] : rows_) {
    store.samples_.push_back(id);
    for (const auto& [epoch, entry] : row) {
      all_epochs.insert(epoch);
      for (const auto& [name, v] : entry.extras) metric_names.insert(name);
    }
  }
  for (int epoch : all_epochs) {
    std::vector<std::string> missing;
    for (const auto& [id, row] : rows_) {
      if (!row.contains(epoch)) missing.push_back(id);
    }
    if (missing.empty()) {
      store.epochs_.push_back(epoch);
    } else {
      store.partial_.emplace(epoch, std::move(missing));
    }
  }

  const std::size_t n = store.samples_.size();
  const std::size_t t = store.epochs_.size();
  store.dice_.assign(n * t, 0.0);
  for (const auto& name : metric_names) {
    store.extras_.emplace(name, std::vector<double>(n * t, std::numeric_limits<double>::quiet_NaN()));
  }
  std::size_t s = 0;
  for (const auto& [id, row] : rows_) {
    for (std::size_t e = 0; e < t; ++e) {
      const Entry& entry = row.at(store.epochs_[e]);
      store.dice_[s * t + e] = entry.dice;
      for (const auto& [name, v] : entry.extras) store.extras_.at(name)[s * t + e] = v;
    }
    ++s;
  }
  return store;
}

}  // namespace dadprune
