#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "dadprune/error.hpp"
#include "dadprune/metrics.hpp"
#include "test_support.hpp"

using namespace dadprune;
using namespace dadprune::testing;

namespace {

Dims line(std::uint32_t n) { return Dims{n, 1, 1, 3}; }

MaskVolume mask_of(std::vector<std::uint8_t> v) {
  const auto n = static_cast<std::uint32_t>(v.size());
  return MaskVolume(line(n), std::move(v));
}

ProbabilityVolume probs_of(std::vector<float> v) {
  const auto n = static_cast<std::uint32_t>(v.size());
  return ProbabilityVolume(line(n), std::move(v));
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected dadprune::Error");
  return Errc::io_failure;
}

}  // namespace

TEST_SUITE("volume") {
  TEST_CASE("constructors validate length and values") {
    CHECK(code_of([] { MaskVolume(line(3), {0, 1}); }) == Errc::shape_mismatch);
    CHECK(code_of([] { MaskVolume(line(2), {0, 2}); }) == Errc::invalid_value);
    CHECK(code_of([] { ProbabilityVolume(line(2), {0.5f, 1.5f}); }) == Errc::invalid_value);
    CHECK(code_of([] { ProbabilityVolume(line(1), {std::nanf("")}); }) == Errc::invalid_value);
    CHECK(code_of([] { MaskVolume(Dims{0, 1, 1, 3}, {}); }) == Errc::invalid_value);
  }

  TEST_CASE("threshold maps exactly 0.5 to foreground") {
    const auto m = threshold(probs_of({0.0f, 0.49999997f, 0.5f, 1.0f}));
    CHECK(m.data() == std::vector<std::uint8_t>{0, 0, 1, 1});
  }

  TEST_CASE("saliency stack invariants") {
    RealVolume a(line(2), {0.f, 1.f});
    RealVolume b(Dims{1, 2, 1, 3}, {0.f, 1.f});
    CHECK(code_of([&] { SaliencyStack({0}, {a}); }) == Errc::insufficient_data);
    CHECK(code_of([&] { SaliencyStack({0, 1}, {a, b}); }) == Errc::shape_mismatch);
    CHECK(code_of([&] { SaliencyStack({2, 2}, {a, a}); }) == Errc::invalid_value);
  }
}

TEST_SUITE("dice") {
  TEST_CASE("identical nonempty masks give 1") {
    const auto m = mask_of({0, 1, 1, 0, 1});
    CHECK(dice(m, m) == 1.0);
  }

  TEST_CASE("disjoint nonempty masks give 0") {
    CHECK(dice(mask_of({1, 1, 0, 0}), mask_of({0, 0, 1, 1})) == 0.0);
  }

  TEST_CASE("two of four foreground voxels found") {
    const auto truth = mask_of({1, 1, 1, 1, 0, 0, 0, 0});
    const auto pred = mask_of({1, 1, 0, 0, 0, 0, 0, 0});
    const double oracle = oracle_dice(pred, truth);
    CHECK(oracle == doctest::Approx(2.0 * 2 / (2 + 4)).epsilon(1e-12));
    CHECK(dice(pred, truth) == doctest::Approx(0.6666666667).epsilon(1e-9));
    CHECK(dice(pred, truth) == doctest::Approx(oracle).epsilon(1e-12));
  }

  TEST_CASE("empty-mask conventions") {
    CHECK(dice(mask_of({0, 0, 0}), mask_of({0, 0, 0})) == 1.0);
    CHECK(dice(mask_of({0, 1, 0}), mask_of({0, 0, 0})) == 0.0);
    CHECK(dice(mask_of({0, 0, 0}), mask_of({0, 1, 0})) == 0.0);
  }

  TEST_CASE("dimension mismatch names both dims") {
    try {
      dice(MaskVolume(Dims{2, 2, 1, 3}), MaskVolume(Dims{4, 1, 1, 3}));
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::shape_mismatch);
      CHECK(std::string(e.what()).find("2x2x1") != std::string::npos);
      CHECK(std::string(e.what()).find("4x1x1") != std::string::npos);
    }
  }

  TEST_CASE("symmetric, bounded, and permutation invariant") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 50; ++iter) {
      const Dims d = random_dims(rng, 8);
      const auto a = random_mask(rng, d, 0.3);
      const auto b = random_mask(rng, d, 0.3);
      const double ab = dice(a, b);
      CHECK(ab == dice(b, a));
      CHECK(ab >= 0.0);
      CHECK(ab <= 1.0);
      if (a.foreground_count() > 0) CHECK(dice(a, a) == 1.0);

      std::vector<std::size_t> perm(a.size());
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<std::uint8_t> pa(a.size()), pb(b.size());
      for (std::size_t i = 0; i < perm.size(); ++i) {
        pa[i] = a[perm[i]];
        pb[i] = b[perm[i]];
      }
      CHECK(dice(MaskVolume(d, pa), MaskVolume(d, pb)) == doctest::Approx(ab).epsilon(1e-15));
    }
  }
}

TEST_SUITE("l2 scores") {
  TEST_CASE("naive_l2_score examples") {
    const auto truth = mask_of({0, 1, 1, 0});
    CHECK(naive_l2_score(ProbabilityVolume::from_mask(truth), truth) == 0.0);

    const auto bg = MaskVolume(line(8));
    const auto half = probs_of(std::vector<float>(8, 0.5f));
    CHECK(oracle_whole_l2(half, bg) == doctest::Approx(0.5));
    CHECK(naive_l2_score(half, bg) == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("correct background dilutes whole-volume scores") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 20; ++iter) {
      const std::uint32_t n = 10 + iter;
      auto truth = random_mask_with_foreground(rng, line(n), 0.3);
      auto pred = random_probs(rng, line(n));
      std::vector<std::uint8_t> t2 = truth.data();
      std::vector<float> p2 = pred.data();
      t2.resize(n + 1000, 0);
      p2.resize(n + 1000, 0.0f);
      const MaskVolume big_truth(line(n + 1000), t2);
      const ProbabilityVolume big_pred(line(n + 1000), p2);
      const double before = oracle_whole_l2(pred, truth);
      const double after = oracle_whole_l2(big_pred, big_truth);
      REQUIRE(after < before);
      CHECK(naive_l2_score(big_pred, big_truth) < naive_l2_score(pred, truth));
      CHECK(el2n(big_pred, big_truth) < el2n(pred, truth));
      // Foreground-only score ignores the padding.
      CHECK(el2nx(big_pred, big_truth) == el2nx(pred, truth));
    }
  }

  TEST_CASE("el2n examples") {
    const auto truth = mask_of({1, 0, 1, 0, 0, 1, 1, 0, 0});
    CHECK(el2n(ProbabilityVolume::from_mask(truth), truth) == 0.0);

    std::vector<float> inverted;
    for (auto v : truth.data()) inverted.push_back(v ? 0.0f : 1.0f);
    CHECK(el2n(probs_of(inverted), truth) == doctest::Approx(1.0).epsilon(1e-15));

    auto one_off = ProbabilityVolume::from_mask(truth).data();
    one_off[4] = 1.0f;
    const auto pred = probs_of(one_off);
    const double expected = 1.0 / std::sqrt(9.0);
    CHECK(oracle_whole_l2(pred, truth) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(el2n(pred, truth) == doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("el2nx examples") {
    const auto truth = mask_of({1, 1, 0, 0, 0, 1});
    CHECK(el2nx(probs_of({1.f, 1.f, 0.9f, 0.3f, 0.77f, 1.f}), truth) == 0.0);

    const auto half = probs_of({0.5f, 0.5f, 0.f, 0.f, 0.f, 0.5f});
    CHECK(oracle_foreground_l2(half, truth) == doctest::Approx(0.5));
    CHECK(el2nx(half, truth) == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("background perturbation moves el2n but never el2nx") {
    std::mt19937_64 rng(17);
    for (int iter = 0; iter < 30; ++iter) {
      const Dims d = random_dims(rng, 10);
      const auto truth = random_mask_with_foreground(rng, d, 0.2);
      const auto pred = random_probs(rng, d);
      auto perturbed = pred.data();
      bool changed = false;
      for (std::size_t i = 0; i < perturbed.size(); ++i) {
        if (truth[i] == 0) {
          const float v = std::uniform_real_distribution<float>(0.f, 1.f)(rng);
          changed = changed || v != perturbed[i];
          perturbed[i] = v;
        }
      }
      const ProbabilityVolume moved(d, perturbed);
      CHECK(el2nx(moved, truth) == el2nx(pred, truth));
      if (changed) CHECK(oracle_whole_l2(moved, truth) != oracle_whole_l2(pred, truth));
    }
  }

  TEST_CASE("el2nx refuses an empty label") {
    CHECK(code_of([] { el2nx(probs_of({0.1f, 0.2f}), mask_of({0, 0})); }) == Errc::no_foreground);
  }

  TEST_CASE("shape errors") {
    const auto p = probs_of({0.1f, 0.2f});
    const auto t = mask_of({0, 1, 0});
    CHECK(code_of([&] { el2n(p, t); }) == Errc::shape_mismatch);
    CHECK(code_of([&] { el2nx(p, t); }) == Errc::shape_mismatch);
    CHECK(code_of([&] { naive_l2_score(p, t); }) == Errc::shape_mismatch);
    CHECK(code_of([&] { dice(p, t); }) == Errc::shape_mismatch);
  }
}

TEST_SUITE("vog") {
  TEST_CASE("identical volumes have zero variance") {
    RealVolume v(line(3), {0.3f, -2.f, 5.f});
    CHECK(vog(SaliencyStack({1, 2, 3}, {v, v, v})) == 0.0);
  }

  TEST_CASE("two epochs, one voxel, values 0 and 2") {
    std::vector<RealVolume> stack{RealVolume(line(1), {0.f}), RealVolume(line(1), {2.f})};
    CHECK(oracle_vog(stack) == doctest::Approx(1.0));
    CHECK(vog(SaliencyStack({0, 1}, stack)) == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("three constant volumes 1, 2, 3") {
    const Dims d{2, 2, 2, 3};
    std::vector<RealVolume> stack;
    for (float c : {1.f, 2.f, 3.f}) stack.emplace_back(d, std::vector<float>(8, c));
    CHECK(oracle_vog(stack) == doctest::Approx(2.0 / 3.0));
    CHECK(vog(SaliencyStack({0, 1, 2}, stack)) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("metrics agree with brute-force oracles on random volumes") {
  std::mt19937_64 rng(2024);
  for (int iter = 0; iter < 25; ++iter) {
    const Dims d = random_dims(rng, 12);
    const auto truth = random_mask_with_foreground(rng, d, 0.25);
    const auto pred = random_probs(rng, d);
    const auto pred_mask = random_mask(rng, d, 0.25);
    CHECK(close_rel(dice(pred_mask, truth), oracle_dice(pred_mask, truth)));
    CHECK(close_rel(dice(pred, truth), oracle_thresholded_dice(pred, truth)));
    CHECK(close_rel(el2n(pred, truth), oracle_whole_l2(pred, truth)));
    CHECK(close_rel(naive_l2_score(pred, truth), oracle_whole_l2(pred, truth)));
    CHECK(close_rel(el2nx(pred, truth), oracle_foreground_l2(pred, truth)));
    std::vector<RealVolume> stack;
    for (int k = 0; k < 4; ++k) stack.push_back(random_real(rng, d, 0.5f));
    CHECK(close_rel(vog(SaliencyStack({0, 1, 2, 3}, stack)), oracle_vog(stack)));
  }
}
