#include "dadprune/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dadprune/error.hpp"

namespace dadprune {

DadWindow::DadWindow(int delta_t) : delta_t_(delta_t) {
  if (delta_t < 1) {
    throw Error(Errc::out_of_range, "DAD window length must be >= 1, got " + std::to_string(delta_t));
  }
}

namespace {

std::string join_epochs(const std::vector<int>& epochs) {
  std::string out;
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(epochs[i]);
  }
  return out;
}

void require_sample(const TrajectoryStore& store, const std::string& sample_id) {
  if (!store.has_sample(sample_id)) {
    throw Error(Errc::not_found, "unknown sample '" + sample_id + "'");
  }
}

// Dice values for epochs [first, last], in epoch order.
std::vector<double> collect_range(const TrajectoryStore& store, const std::string& sample_id,
                                  int first, int last) {
  require_sample(store, sample_id);
  std::vector<double> values;
  std::vector<int> missing;
  values.reserve(static_cast<std::size_t>(std::max(0, last - first + 1)));
  for (int e = first; e <= last; ++e) {
    if (auto d = store.dice(sample_id, e)) {
      values.push_back(*d);
    } else {
      missing.push_back(e);
    }
  }
  if (!missing.empty()) {
    throw Error(Errc::incomplete_window, "sample '" + sample_id + "' has no complete records for epochs [" +
                                             join_epochs(missing) + "] in window [" +
                                             std::to_string(first) + ", " + std::to_string(last) + "]");
  }
  return values;
}

struct MeanSd {
  double mean;
  double sd;
};

// Mean is clamped into [min, max] of the inputs so rounding can never push a
// constant window off its own value.
MeanSd mean_sd(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double mean = std::clamp(sum / n, *lo, *hi);
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / n)};
}

void require_complete_epochs(const TrajectoryStore& store, int first, int last) {
  for (int e = first; e <= last; ++e) {
    if (store.has_epoch(e)) continue;
    auto missing = store.missing_samples(e);
    if (!missing.empty()) {
      throw Error(Errc::incomplete_epoch, "epoch " + std::to_string(e) +
                                              " is incomplete; first sample without a record: '" +
                                              missing.front() + "'");
    }
    throw Error(Errc::incomplete_epoch, "epoch " + std::to_string(e) + " has no records");
  }
}

}  // namespace

double dad_score(const TrajectoryStore& store, const std::string& sample_id, int t, DadWindow window) {
  return mean_sd(collect_range(store, sample_id, window.first_epoch(t), t)).mean;
}

double full_horizon_dad(const TrajectoryStore& store, const std::string& sample_id, int horizon) {
  require_sample(store, sample_id);
  if (store.epochs().empty() || horizon < store.epochs().front()) {
    throw Error(Errc::out_of_range, "horizon " + std::to_string(horizon) +
                                        " precedes the first complete epoch");
  }
  return mean_sd(collect_range(store, sample_id, store.epochs().front(), horizon)).mean;
}

double variability(const TrajectoryStore& store, const std::string& sample_id, int t, DadWindow window) {
  return mean_sd(collect_range(store, sample_id, window.first_epoch(t), t)).sd;
}

DynamicsSnapshot snapshot(const TrajectoryStore& store, int t, DadWindow window) {
  if (store.empty()) throw Error(Errc::empty_input, "trajectory store is empty");
  require_complete_epochs(store, window.first_epoch(t), t);
  DynamicsSnapshot snap;
  snap.epoch = t;
  snap.points.reserve(store.sample_count());
  for (const auto& id : store.sample_ids()) {
    const MeanSd ms = mean_sd(collect_range(store, id, window.first_epoch(t), t));
    snap.points.push_back({id, ms.mean, ms.sd});
  }
  return snap;
}

double moving_distance(const DynamicsSnapshot& prev, const DynamicsSnapshot& curr, DistanceMode mode) {
  const bool same_ids =
      prev.points.size() == curr.points.size() &&
      std::equal(prev.points.begin(), prev.points.end(), curr.points.begin(),
                 [](const DataPoint& a, const DataPoint& b) { return a.sample_id == b.sample_id; });
  if (!same_ids) {
    std::vector<std::string> a, b, diff;
    for (const auto& p : prev.points) a.push_back(p.sample_id);
    for (const auto& p : curr.points) b.push_back(p.sample_id);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
    std::string listing;
    for (std::size_t i = 0; i < diff.size() && i < 20; ++i) listing += (i ? ", " : "") + diff[i];
    if (diff.size() > 20) listing += ", ...";
    throw Error(Errc::sample_set_mismatch,
                "snapshots cover different samples; symmetric difference: [" + listing + "]");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < prev.points.size(); ++i) {
    const double dmu = curr.points[i].mu - prev.points[i].mu;
    const double dsigma = curr.points[i].sigma - prev.points[i].sigma;
    total += mode == DistanceMode::absolute ? std::abs(dmu) + std::abs(dsigma) : dmu + dsigma;
  }
  return total;
}

StopDecision should_stop(std::span<const double> history) {
  if (history.empty()) throw Error(Errc::empty_input, "moving-distance history is empty");
  for (double v : history) {
    if (std::isnan(v)) throw Error(Errc::invalid_value, "moving-distance history contains NaN");
  }
  StopDecision d;
  d.l_max = *std::max_element(history.begin(), history.end());
  d.current = history.back();
  d.ratio = d.l_max > 0.0 ? d.current / d.l_max : 0.0;
  d.stop = history.size() >= 2 && d.current < kStopFraction * d.l_max;
  return d;
}

double subset_overlap(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) throw Error(Errc::empty_input, "subset_overlap needs non-empty sets");
  if (a.size() != b.size()) {
    throw Error(Errc::size_mismatch, "subset sizes differ (" + std::to_string(a.size()) + " vs " +
                                         std::to_string(b.size()) + ")");
  }
  auto sa = a;
  auto sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (std::adjacent_find(sa.begin(), sa.end()) != sa.end() ||
      std::adjacent_find(sb.begin(), sb.end()) != sb.end()) {
    throw Error(Errc::invalid_value, "subset contains duplicate sample ids");
  }
  std::vector<std::string> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(sa.size());
}

std::optional<StopDecision> StopMonitor::observe(DynamicsSnapshot snap) {
  if (!prev_) {
    prev_ = std::move(snap);
    return std::nullopt;
  }
  const double l = moving_distance(*prev_, snap, mode_);
  curve_.push_back({snap.epoch, l});
  history_.push_back(l);
  StopDecision d = should_stop(history_);
  if (d.stop && !stop_epoch_) stop_epoch_ = snap.epoch;
  prev_ = std::move(snap);
  return d;
}

LCurve moving_distance_curve(const TrajectoryStore& store, DadWindow window, std::optional<int> cadence,
                             DistanceMode mode) {
  if (store.empty() || store.epochs().empty()) {
    throw Error(Errc::empty_input, "trajectory store has no complete epochs");
  }
  const int step = cadence.value_or(window.delta_t());
  if (step < 1) throw Error(Errc::out_of_range, "snapshot cadence must be >= 1");
  const int first = store.epochs().front() + window.delta_t() - 1;
  const int last = store.epochs().back();
  if (first > last) {
    throw Error(Errc::insufficient_data, "store spans fewer epochs than one DAD window");
  }
  StopMonitor monitor(mode);
  for (int t = first; t <= last; t += step) monitor.observe(snapshot(store, t, window));
  return {monitor.curve(), monitor.stop_epoch()};
}

std::optional<std::size_t> find_stop_index(const std::vector<LCurvePoint>& curve) {
  std::vector<double> history;
  history.reserve(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    history.push_back(curve[i].distance);
    if (should_stop(history).stop) return i;
  }
  return std::nullopt;
}

}  // namespace dadprune
