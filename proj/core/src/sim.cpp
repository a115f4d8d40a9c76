#include "dadprune/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numeric>
#include <set>

#include "dadprune/error.hpp"
#include "dadprune/metrics.hpp"
#include "dadprune/random.hpp"

namespace dadprune {

SimSampleSpec make_sample_spec(std::string sample_id, double difficulty, int onset, const SimParams& params) {
  SimSampleSpec s;
  s.sample_id = std::move(sample_id);
  s.difficulty = difficulty;
  s.plateau = 1.0 - params.plateau_gap * difficulty;
  s.tau = params.tau0 * (1.0 + 4.0 * difficulty);
  s.noise = params.noise;
  s.onset = onset;
  s.pre_onset_level = params.pre_onset_level;
  s.pre_onset_noise = params.pre_onset_noise;
  return s;
}

void validate(const SimSampleSpec& s) {
  auto fail = [&](const std::string& what) {
    throw Error(Errc::invalid_value, "sample '" + s.sample_id + "': " + what);
  };
  if (s.sample_id.empty()) fail("empty sample id");
  if (!(s.difficulty >= 0.0 && s.difficulty <= 1.0)) fail("difficulty must be in [0, 1]");
  if (!(s.plateau >= 0.0 && s.plateau <= 1.0)) fail("plateau must be in [0, 1]");
  if (!(s.tau > 0.0) || !std::isfinite(s.tau)) fail("tau must be positive");
  if (!(s.noise >= 0.0) || !std::isfinite(s.noise)) fail("noise must be >= 0");
  if (s.onset < 0) fail("onset must be >= 0");
  if (!(s.pre_onset_level >= 0.0 && s.pre_onset_level <= 1.0)) fail("pre-onset level must be in [0, 1]");
  if (!(s.pre_onset_noise >= 0.0) || !std::isfinite(s.pre_onset_noise)) fail("pre-onset noise must be >= 0");
}

double expected_dice(const SimSampleSpec& s, int epoch) {
  if (epoch < s.onset) return s.pre_onset_level;
  return s.plateau * (1.0 - std::exp(-static_cast<double>(epoch - s.onset) / s.tau));
}

std::vector<SimSampleSpec> planted_ensemble(std::size_t n, const SimParams& params, std::uint64_t seed) {
  if (n == 0) throw Error(Errc::empty_input, "ensemble needs at least one sample");
  if (params.onset_jitter < 0) throw Error(Errc::invalid_value, "onset jitter must be >= 0");
  std::vector<std::size_t> slot(n);
  std::iota(slot.begin(), slot.end(), std::size_t{0});
  Rng rng(derive_seed(seed, "ensemble"));
  for (std::size_t i = n - 1; i > 0; --i) std::swap(slot[i], slot[rng.below(i + 1)]);

  const int width = n > 1000 ? static_cast<int>(std::to_string(n - 1).size()) : 3;
  std::vector<SimSampleSpec> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "s%0*zu", width, i);
    const double d = n == 1 ? 0.0 : static_cast<double>(slot[i]) / static_cast<double>(n - 1);
    const int onset = params.onset + static_cast<int>(rng.below(static_cast<std::uint64_t>(params.onset_jitter) + 1));
    out.push_back(make_sample_spec(id, d, onset, params));
  }
  return out;
}

std::vector<double> simulate_dice_curve(const SimSampleSpec& spec, int epochs, std::uint64_t seed) {
  validate(spec);
  if (epochs < 1) throw Error(Errc::invalid_value, "epoch count must be >= 1");
  Rng rng(derive_seed(seed, spec.sample_id));
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(epochs));
  for (int e = 1; e <= epochs; ++e) {
    const double xi = rng.normal();
    const double amplitude = e < spec.onset ? spec.pre_onset_noise : spec.noise;
    curve.push_back(std::clamp(expected_dice(spec, e) + amplitude * xi, 0.0, 1.0));
  }
  return curve;
}

std::vector<ScoreRecord> simulate_trajectories(const std::vector<SimSampleSpec>& specs, int epochs,
                                               std::uint64_t seed) {
  if (specs.empty()) throw Error(Errc::empty_input, "no sample specs to simulate");
  if (epochs < 1) throw Error(Errc::invalid_value, "epoch count must be >= 1");
  std::set<std::string> seen;
  for (const auto& s : specs) {
    if (!seen.insert(s.sample_id).second) {
      throw Error(Errc::invalid_value, "duplicate sample id '" + s.sample_id + "' in specs");
    }
  }
  std::vector<std::vector<double>> curves;
  curves.reserve(specs.size());
  for (const auto& s : specs) curves.push_back(simulate_dice_curve(s, epochs, seed));

  std::vector<ScoreRecord> out;
  out.reserve(specs.size() * static_cast<std::size_t>(epochs));
  for (int e = 1; e <= epochs; ++e) {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      out.push_back({specs[i].sample_id, e, curves[i][static_cast<std::size_t>(e - 1)], {}});
    }
  }
  return out;
}

namespace {

// City-block distance (6-connected steps) from each voxel to the nearest voxel
// of the other class; max() when the other class is absent.
std::vector<std::uint32_t> distance_to_other_class(const MaskVolume& mask) {
  const Dims& d = mask.dims();
  const std::size_t n = mask.size();
  constexpr auto kFar = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(n, kFar);
  std::deque<std::size_t> queue;
  const std::size_t sx = 1, sy = d.width, sz = static_cast<std::size_t>(d.width) * d.height;
  auto for_neighbors = [&](std::size_t i, auto&& fn) {
    const std::size_t x = i % d.width;
    const std::size_t y = (i / d.width) % d.height;
    const std::size_t z = i / sz;
    if (x > 0) fn(i - sx);
    if (x + 1 < d.width) fn(i + sx);
    if (y > 0) fn(i - sy);
    if (y + 1 < d.height) fn(i + sy);
    if (z > 0) fn(i - sz);
    if (z + 1 < d.depth) fn(i + sz);
  };
  // Seeds: voxels touching the other class are at distance 1.
  for (std::size_t i = 0; i < n; ++i) {
    bool border = false;
    for_neighbors(i, [&](std::size_t j) { border = border || mask[j] != mask[i]; });
    if (border) {
      dist[i] = 1;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    for_neighbors(i, [&](std::size_t j) {
      if (mask[j] == mask[i] && dist[j] == kFar) {
        dist[j] = dist[i] + 1;
        queue.push_back(j);
      }
    });
  }
  return dist;
}

struct CorruptionOrders {
  std::vector<std::size_t> erode;   // foreground, boundary first
  std::vector<std::size_t> dilate;  // background, boundary first
  std::vector<std::size_t> salt;    // background, random
};

CorruptionOrders corruption_orders(const MaskVolume& truth, std::uint64_t seed) {
  const auto dist = distance_to_other_class(truth);
  Rng rng(seed);
  std::vector<std::uint64_t> key(truth.size());
  for (auto& k : key) k = rng.next();
  CorruptionOrders o;
  for (std::size_t i = 0; i < truth.size(); ++i) (truth[i] ? o.erode : o.dilate).push_back(i);
  auto by_distance = [&](std::size_t a, std::size_t b) {
    return dist[a] != dist[b] ? dist[a] < dist[b] : (key[a] != key[b] ? key[a] < key[b] : a < b);
  };
  std::sort(o.erode.begin(), o.erode.end(), by_distance);
  std::sort(o.dilate.begin(), o.dilate.end(), by_distance);
  o.salt = o.dilate;
  std::sort(o.salt.begin(), o.salt.end(),
            [&](std::size_t a, std::size_t b) { return key[a] != key[b] ? key[a] < key[b] : a < b; });
  return o;
}

std::size_t scaled(double strength, double total) {
  return static_cast<std::size_t>(std::llround(strength * total));
}

MaskVolume corrupt(const MaskVolume& truth, const CorruptionOrders& o, double strength, const CorruptionParams& p) {
  std::vector<std::uint8_t> data = truth.data();
  const double fg = static_cast<double>(o.erode.size());
  const std::size_t erode = std::min(o.erode.size(), scaled(strength, fg));
  const std::size_t dilate = std::min(o.dilate.size(), scaled(strength, fg * p.dilate_ratio));
  const std::size_t salt = std::min(o.salt.size(), scaled(strength, static_cast<double>(o.salt.size()) * p.salt_rate));
  for (std::size_t i = 0; i < erode; ++i) data[o.erode[i]] = 0;
  for (std::size_t i = 0; i < dilate; ++i) data[o.dilate[i]] = 1;
  for (std::size_t i = 0; i < salt; ++i) data[o.salt[i]] = 1;
  return MaskVolume(truth.dims(), std::move(data));
}

ProbabilityVolume soften(const MaskVolume& mask, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<float> probs(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const float u = static_cast<float>(rng.uniform()) * 0.5f;  // [0, 0.5)
    probs[i] = mask[i] ? std::min(1.0f, 0.5f + u) : std::min(0.49999997f, u);
  }
  return ProbabilityVolume(mask.dims(), std::move(probs));
}

ProbabilityVolume calibrate(const MaskVolume& truth, const CorruptionOrders& orders, double target,
                            std::uint64_t value_seed, const CorruptionParams& p) {
  if (target >= 1.0) return ProbabilityVolume::from_mask(truth);
  // dice(strength) is non-increasing: every corruption set grows with strength.
  double lo = 0.0, hi = 1.0;
  double best_strength = 0.0;
  double best_error = std::abs(1.0 - target);
  for (int it = 0; it < p.max_iterations && best_error > p.tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double measured = dice(corrupt(truth, orders, mid, p), truth);
    const double err = std::abs(measured - target);
    if (err < best_error) {
      best_error = err;
      best_strength = mid;
    }
    (measured > target ? lo : hi) = mid;
  }
  const double at_full = dice(corrupt(truth, orders, 1.0, p), truth);
  if (std::abs(at_full - target) < best_error) {
    best_error = std::abs(at_full - target);
    best_strength = 1.0;
  }
  if (best_error > p.max_error) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "cannot reach dice %.4f on this label (closest %.4f away, %zu foreground voxels)",
                  target, best_error, orders.erode.size());
    throw Error(Errc::calibration_failed, msg);
  }
  return soften(corrupt(truth, orders, best_strength, p), value_seed);
}

}  // namespace

ProbabilityVolume corrupt_to_dice(const MaskVolume& truth, double target, std::uint64_t order_seed,
                                  std::uint64_t value_seed, const CorruptionParams& params) {
  if (truth.foreground_count() == 0) {
    throw Error(Errc::no_foreground, "cannot corrupt a label without foreground");
  }
  if (!(target >= 0.0 && target <= 1.0)) throw Error(Errc::out_of_range, "target dice must be in [0, 1]");
  return calibrate(truth, corruption_orders(truth, order_seed), target, value_seed, params);
}

MaskSequence simulate_mask_sequence(const MaskVolume& truth, const SimSampleSpec& spec, int epochs,
                                    std::uint64_t seed, const CorruptionParams& params) {
  if (truth.foreground_count() == 0) {
    throw Error(Errc::no_foreground, "sample '" + spec.sample_id + "': label has no foreground");
  }
  MaskSequence seq;
  seq.targets = simulate_dice_curve(spec, epochs, seed);
  const auto orders = corruption_orders(truth, derive_seed(seed, spec.sample_id + "/orders"));
  seq.volumes.reserve(seq.targets.size());
  for (std::size_t i = 0; i < seq.targets.size(); ++i) {
    const auto value_seed = derive_seed(seed, spec.sample_id + "/epoch/" + std::to_string(i + 1));
    seq.volumes.push_back(calibrate(truth, orders, seq.targets[i], value_seed, params));
  }
  return seq;
}

MaskVolume ellipsoid_mask(Dims dims, double fraction) {
  MaskVolume mask(dims);
  const double cx = (dims.width - 1) / 2.0, cy = (dims.height - 1) / 2.0, cz = (dims.depth - 1) / 2.0;
  const double rx = std::max(0.5, fraction * dims.width / 2.0);
  const double ry = std::max(0.5, fraction * dims.height / 2.0);
  const double rz = std::max(0.5, fraction * dims.depth / 2.0);
  for (std::uint32_t z = 0; z < dims.depth; ++z) {
    for (std::uint32_t y = 0; y < dims.height; ++y) {
      for (std::uint32_t x = 0; x < dims.width; ++x) {
        const double dx = (x - cx) / rx, dy = (y - cy) / ry, dz = (z - cz) / rz;
        if (dx * dx + dy * dy + dz * dz <= 1.0) {
          mask.set(x + static_cast<std::size_t>(dims.width) * (y + static_cast<std::size_t>(dims.height) * z), true);
        }
      }
    }
  }
  return mask;
}

}  // namespace dadprune
