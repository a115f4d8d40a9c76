#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "dadprune/ddt1.hpp"
#include "dadprune/dynamics.hpp"
#include "dadprune/error.hpp"
#include "dadprune/metrics.hpp"
#include "dadprune/sim.hpp"
#include "dadprune/stats.hpp"
#include "test_support.hpp"

using namespace dadprune;
using namespace dadprune::testing;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected dadprune::Error");
  return Errc::io_failure;
}

SimParams noiseless() {
  SimParams p;
  p.noise = 0.0;
  p.pre_onset_noise = 0.0;
  return p;
}

}  // namespace

TEST_SUITE("specs") {
  TEST_CASE("plateau and time constant follow difficulty") {
    const auto s = make_sample_spec("a", 0.5, 10);
    CHECK(s.plateau == doctest::Approx(1.0 - 0.3 * 0.5));
    CHECK(s.tau == doctest::Approx(20.0 * 3.0));
    CHECK(s.onset == 10);
  }

  TEST_CASE("validation") {
    auto s = make_sample_spec("a", 0.5, 10);
    s.difficulty = 1.5;
    CHECK(code_of([&] { validate(s); }) == Errc::invalid_value);
    s = make_sample_spec("a", 0.5, 10);
    s.tau = 0.0;
    CHECK(code_of([&] { validate(s); }) == Errc::invalid_value);
    s = make_sample_spec("a", 0.5, 10);
    s.noise = -1.0;
    CHECK(code_of([&] { validate(s); }) == Errc::invalid_value);
    CHECK(code_of([] { simulate_trajectories({}, 10, 1); }) == Errc::empty_input);
    const auto ok = make_sample_spec("a", 0.5, 10);
    CHECK(code_of([&] { simulate_trajectories({ok}, 0, 1); }) == Errc::invalid_value);
    CHECK(code_of([&] { simulate_trajectories({ok, ok}, 5, 1); }) == Errc::invalid_value);
  }

  TEST_CASE("planted ensemble has distinct, evenly spaced difficulties") {
    SimParams p;
    p.onset_jitter = 5;
    const auto specs = planted_ensemble(11, p, 3);
    std::set<double> d;
    for (const auto& s : specs) {
      d.insert(s.difficulty);
      CHECK(s.onset >= 10);
      CHECK(s.onset <= 15);
    }
    CHECK(d.size() == 11);
    CHECK(*d.begin() == 0.0);
    CHECK(*d.rbegin() == 1.0);
    CHECK(specs.front().sample_id == "s000");
    // Assignment is shuffled by seed.
    const auto other = planted_ensemble(11, p, 4);
    bool differs = false;
    for (std::size_t i = 0; i < 11; ++i) differs = differs || other[i].difficulty != specs[i].difficulty;
    CHECK(differs);
  }
}

TEST_SUITE("trajectories") {
  TEST_CASE("noise-free curve tends to the plateau") {
    const auto s = make_sample_spec("a", 0.7, 10, noiseless());
    const auto c = simulate_dice_curve(s, 5000, 1);
    CHECK(c.back() == doctest::Approx(s.plateau).epsilon(1e-12));
    CHECK(c.front() == doctest::Approx(0.1));
  }

  TEST_CASE("noise-free curve never decreases after onset") {
    const auto s = make_sample_spec("a", 0.3, 12, noiseless());
    const auto c = simulate_dice_curve(s, 300, 1);
    for (std::size_t i = 12; i < c.size(); ++i) CHECK(c[i] >= c[i - 1]);
  }

  TEST_CASE("always clamped to [0, 1]") {
    SimParams p;
    p.noise = 0.5;
    p.pre_onset_noise = 0.5;
    for (const auto& r : simulate_trajectories(planted_ensemble(20, p, 1), 100, 9)) {
      CHECK(r.dice >= 0.0);
      CHECK(r.dice <= 1.0);
    }
  }

  TEST_CASE("easiest sample beats the hardest at every post-onset window") {
    const auto easy = make_sample_spec("easy", 0.0, 10, noiseless());
    const auto hard = make_sample_spec("hard", 1.0, 10, noiseless());
    const auto store = TrajectoryStore::from_records(simulate_trajectories({easy, hard}, 300, 1));
    for (int t = 20; t <= 300; ++t) {
      CHECK(dad_score(store, "easy", t) > dad_score(store, "hard", t));
    }
    // Closed form at one window.
    double e = 0, h = 0;
    for (int k = 291; k <= 300; ++k) {
      e += expected_dice(easy, k) / 10;
      h += expected_dice(hard, k) / 10;
    }
    CHECK(dad_score(store, "easy", 300) == doctest::Approx(e).epsilon(1e-12));
    CHECK(dad_score(store, "hard", 300) == doctest::Approx(h).epsilon(1e-12));
  }

  TEST_CASE("same seed, same stream; different seed, different stream") {
    const auto specs = planted_ensemble(10, SimParams{}, 2);
    CHECK(simulate_trajectories(specs, 50, 7) == simulate_trajectories(specs, 50, 7));
    CHECK(simulate_trajectories(specs, 50, 7) != simulate_trajectories(specs, 50, 8));
  }

  TEST_CASE("a sample's curve does not depend on the rest of the ensemble") {
    const auto specs = planted_ensemble(10, SimParams{}, 2);
    const auto all = simulate_trajectories(specs, 30, 7);
    const auto alone = simulate_dice_curve(specs[4], 30, 7);
    for (const auto& r : all) {
      if (r.sample_id == specs[4].sample_id) CHECK(r.dice == alone[static_cast<std::size_t>(r.epoch - 1)]);
    }
  }

  TEST_CASE("records ordered by epoch, then spec order") {
    const auto specs = planted_ensemble(3, SimParams{}, 2);
    const auto recs = simulate_trajectories(specs, 4, 1);
    REQUIRE(recs.size() == 12);
    CHECK(recs[0].epoch == 1);
    CHECK(recs[3].epoch == 2);
    CHECK(recs[4].sample_id == specs[1].sample_id);
  }
}

TEST_SUITE("stats") {
  TEST_CASE("average ranks share ties") {
    const std::vector<double> v{3.0, 1.0, 3.0, 2.0};
    CHECK(average_ranks(v) == std::vector<double>{3.5, 1.0, 3.5, 2.0});
  }

  TEST_CASE("spearman extremes") {
    const std::vector<double> a{1, 2, 3, 4, 5}, b{10, 20, 30, 40, 50}, c{5, 4, 3, 2, 1};
    CHECK(spearman(a, b) == doctest::Approx(1.0));
    CHECK(spearman(a, c) == doctest::Approx(-1.0));
    const std::vector<double> x{1, 2, 3, 4, 5}, y{2, 1, 4, 3, 5};
    // 1 - 6 * sum(d^2) / (n (n^2 - 1)) with sum(d^2) = 4.
    CHECK(spearman(x, y) == doctest::Approx(1.0 - 6.0 * 4 / (5 * 24)));
  }

  TEST_CASE("spearman errors") {
    const std::vector<double> a{1, 2}, b{1, 2, 3}, k{1, 1};
    CHECK_THROWS_AS(spearman(a, b), Error);
    CHECK_THROWS_AS(spearman(a, k), Error);
    CHECK_THROWS_AS(spearman(std::vector<double>{1}, std::vector<double>{1}), Error);
  }
}

TEST_SUITE("mask sequences") {
  TEST_CASE("ellipsoid label has foreground") {
    const auto m = ellipsoid_mask(Dims{16, 16, 8, 3}, 0.6);
    CHECK(m.foreground_count() > 0);
    CHECK(m.foreground_count() < m.size());
  }

  TEST_CASE("target 1 emits the label itself") {
    const auto truth = ellipsoid_mask(Dims{12, 12, 6, 3});
    const auto out = corrupt_to_dice(truth, 1.0, 1, 2);
    CHECK(out.data() == ProbabilityVolume::from_mask(truth).data());
  }

  TEST_CASE("emitted dice tracks each target within 0.05") {
    const auto truth = ellipsoid_mask(Dims{20, 20, 10, 3}, 0.6);
    for (double target : {0.0, 0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.97}) {
      CAPTURE(target);
      const auto v = corrupt_to_dice(truth, target, 3, 4);
      CHECK(std::abs(oracle_thresholded_dice(v, truth) - target) <= 0.05);
    }
  }

  TEST_CASE("sequence follows the simulated curve") {
    const auto truth = ellipsoid_mask(Dims{16, 16, 8, 3}, 0.6);
    const auto spec = make_sample_spec("v", 0.4, 5);
    const auto seq = simulate_mask_sequence(truth, spec, 40, 11);
    REQUIRE(seq.volumes.size() == 40);
    CHECK(seq.targets == simulate_dice_curve(spec, 40, 11));
    for (std::size_t e = 0; e < 40; ++e) {
      CHECK(std::abs(dice(seq.volumes[e], truth) - seq.targets[e]) <= 0.05);
      CHECK(std::abs(oracle_thresholded_dice(seq.volumes[e], truth) - seq.targets[e]) <= 0.05);
    }
  }

  TEST_CASE("same seed gives identical bytes") {
    const auto truth = ellipsoid_mask(Dims{10, 10, 5, 3});
    const auto spec = make_sample_spec("v", 0.4, 2);
    const auto a = simulate_mask_sequence(truth, spec, 8, 5);
    const auto b = simulate_mask_sequence(truth, spec, 8, 5);
    for (std::size_t e = 0; e < 8; ++e) CHECK(encode_volume(a.volumes[e]) == encode_volume(b.volumes[e]));
  }

  TEST_CASE("unattainable targets and empty labels fail") {
    const MaskVolume empty(Dims{4, 4, 4, 3});
    CHECK(code_of([&] { corrupt_to_dice(empty, 0.5, 1, 1); }) == Errc::no_foreground);
    // A one-voxel label can only reach dice 0 or 1 (or 2/3 with one extra voxel).
    MaskVolume dot(Dims{5, 5, 5, 3});
    dot.set(62, true);
    CHECK(code_of([&] { corrupt_to_dice(dot, 0.3, 1, 1); }) == Errc::calibration_failed);
  }
}
