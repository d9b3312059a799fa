#include <gtest/gtest.h>

#include <cmath>

#include "hba/foraging_types.hpp"
#include "hba/posterior.hpp"
#include "hba/time_weight.hpp"

using namespace hba;

TEST(Likelihood, ProductExamples) {
  EXPECT_EQ(product_likelihood({}), 1.0);
  const std::vector<double> consistent(7, 1.0);
  EXPECT_EQ(product_likelihood(consistent), 1.0);
  const std::vector<double> uniform(3, 0.2);
  EXPECT_NEAR(product_likelihood(uniform), 0.008, 1e-15);
}

TEST(Likelihood, TemporalExamples) {
  const auto f = TimeWeight::general(10.0, 0.01, 3.0);
  EXPECT_EQ(tr_likelihood({}, f), 0.0);
  EXPECT_DOUBLE_EQ(f(1), 10.0);
  EXPECT_DOUBLE_EQ(f(2), 9.99);
  EXPECT_DOUBLE_EQ(f(3), 9.92);
  EXPECT_EQ(f(20), 0.0);
  // Contradicted 20 steps ago, consistent since: recent evidence dominates.
  std::vector<double> steps(20, 1.0);
  steps[0] = 0.0;
  EXPECT_GT(tr_likelihood(steps, f), 0.0);
  EXPECT_EQ(f.support(), std::optional<std::size_t>(10));
}

TEST(TimeWeight, GeneralIsNonincreasingAndNonnegative) {
  Rng rng(4);
  for (int k = 0; k < 200; ++k) {
    const auto f = TimeWeight::general(rng.uniform() * 20, rng.uniform(), rng.uniform() * 4);
    double previous = f(1);
    for (std::size_t xi = 1; xi < 200; ++xi) {
      const double v = f(xi);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, previous + 1e-12);
      previous = v;
    }
    if (auto m = f.support()) {
      EXPECT_EQ(f(*m + 1), 0.0);
      if (*m > 0) EXPECT_GT(f(*m), 0.0);
    }
  }
  EXPECT_THROW(TimeWeight::general(-1, 0, 0), ConfigError);
}

TEST(Posterior, ContradictedTypeDropsToZero) {
  Posterior p({"consistent", "other"}, {});
  const std::vector<double> step{1.0, 0.0};
  p.record(step);
  EXPECT_EQ(p.probabilities()[0], 1.0);
  EXPECT_EQ(p.probabilities()[1], 0.0);
}

TEST(Posterior, IdenticalLikelihoodsKeepTheUniformPrior) {
  for (auto mode : {LikelihoodMode::kProduct, LikelihoodMode::kTemporal, LikelihoodMode::kWindowedProduct}) {
    PosteriorConfig config;
    config.mode = mode;
    Posterior p({"a", "b", "c"}, config);
    const std::vector<double> step{0.3, 0.3, 0.3};
    for (int t = 0; t < 15; ++t) {
      p.record(step);
      for (double x : p.probabilities()) EXPECT_NEAR(x, 1.0 / 3.0, 1e-12);
    }
  }
}

TEST(Posterior, AllZeroFallsBackToThePrior) {
  Posterior p({"a", "b"}, {}, {0.25, 0.75});
  const std::vector<double> zero{0.0, 0.0};
  p.record(zero);
  EXPECT_TRUE(p.prior_fallback());
  EXPECT_EQ(p.probabilities()[0], 0.25);
  EXPECT_EQ(p.probabilities()[1], 0.75);
}

TEST(Posterior, NormalizedAfterEveryUpdate) {
  Rng rng(9);
  for (auto mode : {LikelihoodMode::kProduct, LikelihoodMode::kTemporal, LikelihoodMode::kWindowedProduct}) {
    PosteriorConfig config;
    config.mode = mode;
    Posterior p({"a", "b", "c", "d"}, config);
    for (int t = 0; t < 300; ++t) {
      std::vector<double> step(4);
      for (double& x : step) x = rng.bernoulli(0.1) ? 0.0 : rng.uniform();
      p.record(step);
      double total = 0.0;
      for (double x : p.probabilities()) {
        EXPECT_GE(x, 0.0);
        total += x;
      }
      EXPECT_NEAR(total, 1.0, 1e-9);
    }
  }
}

TEST(Posterior, ProductModeZeroPropagates) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    Posterior p({"a", "b", "c"}, {});
    std::vector<bool> dead(3, false);
    for (int t = 0; t < 60; ++t) {
      std::vector<double> step(3);
      for (double& x : step) x = rng.bernoulli(0.05) ? 0.0 : 0.2 + 0.8 * rng.uniform();
      step[2] = 0.5;  // one survivor, so the prior fallback never triggers
      p.record(step);
      for (int k = 0; k < 3; ++k) {
        if (dead[k]) EXPECT_EQ(p.probabilities()[k], 0.0);
        if (p.probabilities()[k] == 0.0) dead[k] = true;
      }
    }
  }
}

TEST(Posterior, TemporalModeForgetsEvidenceOlderThanTheSupport) {
  Rng rng(2);
  PosteriorConfig config;
  config.mode = LikelihoodMode::kTemporal;
  config.weight = TimeWeight::general(10.0, 0.01, 3.0);
  const std::size_t m = *config.weight.support();
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> steps;
    for (int t = 0; t < 40; ++t) {
      std::vector<double> step(3);
      for (double& x : step) x = rng.bernoulli(0.2) ? 0.0 : rng.uniform();
      steps.push_back(step);
    }
    Posterior full({"a", "b", "c"}, config);
    Posterior recent({"a", "b", "c"}, config);
    for (const auto& s : steps) full.record(s);
    for (std::size_t t = steps.size() - m; t < steps.size(); ++t) recent.record(steps[t]);
    if (full.prior_fallback()) continue;
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_NEAR(full.probabilities()[k], recent.probabilities()[k], 1e-12);
    }
  }
}

TEST(Posterior, ConstantWeightRanksLikeProductOnOneStep) {
  Rng rng(6);
  PosteriorConfig tr;
  tr.mode = LikelihoodMode::kTemporal;
  tr.weight = TimeWeight::constant();
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> step(4);
    for (double& x : step) x = rng.uniform();
    Posterior a({"a", "b", "c", "d"}, tr);
    Posterior b({"a", "b", "c", "d"}, {});
    a.record(step);
    b.record(step);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(a.probabilities()[k], b.probabilities()[k], 1e-12);
  }
}

TEST(Posterior, WindowedProductUsesOnlyRecentSteps) {
  PosteriorConfig config;
  config.mode = LikelihoodMode::kWindowedProduct;
  config.window = 3;
  Posterior p({"a", "b"}, config);
  const std::vector<double> kill{0.0, 1.0};
  const std::vector<double> even{0.5, 0.5};
  p.record(kill);
  EXPECT_EQ(p.probabilities()[0], 0.0);
  for (int t = 0; t < 3; ++t) p.record(even);
  EXPECT_NEAR(p.probabilities()[0], 0.5, 1e-12);
}

TEST(TypeSwitch, ConstantTraceIsOneType) {
  std::vector<std::vector<double>> trace(20, {0.7, 0.3});
  const auto s = type_switch_stats(trace);
  EXPECT_EQ(s.types, 1u);
  EXPECT_DOUBLE_EQ(s.mean_duration, 20.0);
}

TEST(TypeSwitch, OneFlipAtRoundTenIsTwoTypes) {
  std::vector<std::vector<double>> trace(10, {0.7, 0.3});
  trace.resize(20, {0.2, 0.8});
  const auto s = type_switch_stats(trace);
  EXPECT_EQ(s.types, 2u);
  EXPECT_DOUBLE_EQ(s.mean_duration, 10.0);
  EXPECT_EQ(s.boundaries, (std::vector<std::size_t>{0, 10, 20}));
}

TEST(TypeSwitch, GrowingArgmaxSetIsNotASwitch) {
  std::vector<std::vector<double>> trace{{0.6, 0.4}, {0.5, 0.5}, {0.4, 0.6}};
  // {0} is contained in {0, 1}; {0, 1} is not contained in {1}.
  EXPECT_EQ(type_switch_stats(trace).types, 2u);
}

TEST(TypePosterior, ConvergesOnAStaticHeuristic) {
  // One deterministic H1 opponent walking towards food on a fixed grid.
  ForagingState s;
  s.width = 8;
  s.height = 8;
  s.players = {{{0, 0}, 1}, {{7, 7}, 1}};
  s.foods = {{{3, 6}, 2, true}, {{6, 1}, 2, true}};
  TypePosterior<ForagingState> belief(1, heuristic_types(), {});
  History<ForagingState> h(s);
  const auto truth = make_heuristic(Heuristic::kH1);
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    const JointAction a{kLoad, static_cast<Action>(rng.categorical(truth->act(h.view(), 1)))};
    h.push(a, step(h.current(), a, rng).next);
    belief.update(h.view());
  }
  const auto probs = belief.posterior().probabilities();
  const auto best = argmax_set(probs);
  EXPECT_NE(std::find(best.begin(), best.end(), 0u), best.end());
  EXPECT_GT(probs[0], 0.0);
}
