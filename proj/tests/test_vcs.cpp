#include <gtest/gtest.h>

#include <random>

#include "vcs_oracle.hpp"
#include "volclust/error.hpp"
#include "volclust/pattern_gen.hpp"
#include "volclust/rng.hpp"
#include "volclust/vcs.hpp"

using namespace volclust;

namespace {

DisagreementSet set_of(const std::vector<double>& times) {
  DisagreementSet set;
  for (std::size_t i = 0; i < times.size(); ++i) {
    set.entries.push_back({i, "e" + std::to_string(i), times[i]});
  }
  return set;
}

std::vector<double> sorted_uniform(std::mt19937_64& gen, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> t(n);
  for (auto& x : t) x = u(gen);
  std::sort(t.begin(), t.end());
  return t;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no volclust::Error thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(NnDistance, Examples) {
  const auto s = set_of({0.0, 1.0, 3.0});
  EXPECT_EQ(nn_distance(s, 2), 2.0);
  EXPECT_EQ(nn_distance(s, 1), 1.0);
  EXPECT_EQ(nn_distance(set_of({2.0, 2.0}), 0), 0.0);
  EXPECT_EQ(code_of([] { nn_distance(set_of({1.0}), 0); }), ErrorCode::InsufficientSet);
}

TEST(DisgDistanceSum, Examples) {
  const auto s = set_of({0.0, 1.0, 3.0});
  EXPECT_EQ(disg_distance_sum(s, {0, 1, 2}), 4.0);
  EXPECT_EQ(disg_distance_sum(s, {2}), nn_distance(s, 2));
  EXPECT_EQ(disg_distance_sum(set_of({5.0, 5.0, 5.0, 5.0}), {0, 1, 2, 3}), 0.0);
  EXPECT_EQ(code_of([] { disg_distance_sum(set_of({}), {}); }), ErrorCode::InsufficientSet);
}

TEST(DistanceToSet, NoExclusionAndEmpty) {
  const auto s = set_of({1.0, 4.0});
  EXPECT_EQ(distance_to_set(s, 4.0), 0.0);
  EXPECT_EQ(distance_to_set(s, 2.0), 1.0);
  EXPECT_EQ(distance_to_set(s, 10.0), 6.0);
  EXPECT_EQ(code_of([] { distance_to_set(set_of({}), 1.0); }), ErrorCode::EmptySet);
}

TEST(RandomReferenceSum, DegeneratePeriod) {
  Rng rng(1);
  const auto r = random_reference_sum(4, {7.0, 7.0}, set_of({2.0, 9.5}), rng);
  EXPECT_EQ(r.times, (std::vector<double>(4, 7.0)));
  EXPECT_EQ(r.sum, 4 * 2.5);
}

TEST(RandomReferenceSum, CoincidentPointContributesZero) {
  Rng rng(1);
  const auto r = random_reference_sum(1, {3.0, 3.0}, set_of({3.0}), rng);
  EXPECT_EQ(r.sum, 0.0);
}

TEST(RandomReferenceSum, FollowsTheDocumentedGenerator) {
  constexpr std::uint64_t seed = 42;
  Rng rng(seed, StreamDomain::VcsTrial, 0);
  const auto r = random_reference_sum(3, {0.0, 1000.0}, set_of({500.0}), rng);
  const auto u = oracle::documented_uniforms(
      seed, static_cast<std::uint64_t>(StreamDomain::VcsTrial), 0, 3);
  double expected = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(r.times[i], 1000.0 * u[i]);
    expected += std::abs(1000.0 * u[i] - 500.0);
  }
  EXPECT_NEAR(r.sum, expected, 1e-9);
  EXPECT_EQ(code_of([&] { random_reference_sum(3, {0, 1}, set_of({}), rng); }),
            ErrorCode::EmptySet);
}

TEST(TStatistic, Examples) {
  EXPECT_EQ(t_statistic(5.0, 0.0), 1.0);
  EXPECT_EQ(t_statistic(7.0, 7.0), 0.5);
  EXPECT_EQ(code_of([] { t_statistic(0.0, 0.0); }), ErrorCode::DegenerateDistances);
}

TEST(Vcs, SingleTimestampIsPerfectCluster) {
  const auto s = set_of(std::vector<double>(10, 42.0));
  const auto r = vcs(s, {0.0, 100.0});
  for (const auto& trial : r.trials) {
    EXPECT_EQ(trial.d_disg, 0.0);
    EXPECT_EQ(trial.t_stat, 1.0);
  }
  EXPECT_EQ(r.vcs, 0.5);
  EXPECT_EQ(r.signed_deviation(), 0.5);
}

TEST(Vcs, TooFewDisagreements) {
  EXPECT_EQ(code_of([] { vcs(set_of({1.0}), {0.0, 2.0}); }), ErrorCode::TooFewDisagreements);
  EXPECT_EQ(code_of([] { vcs(set_of({}), {0.0, 2.0}); }), ErrorCode::TooFewDisagreements);
}

TEST(Vcs, SubsampleSize) {
  VcsConfig c;
  EXPECT_EQ(c.subsample_size(2), 1u);
  EXPECT_EQ(c.subsample_size(3), 1u);
  EXPECT_EQ(c.subsample_size(200), 100u);
  c.subsample_fraction = 0.99;
  EXPECT_EQ(c.subsample_size(10), 9u);
}

TEST(Vcs, DeterministicAndWithinRange) {
  std::mt19937_64 gen(9);
  for (int rep = 0; rep < 50; ++rep) {
    const auto s = set_of(sorted_uniform(gen, 2 + gen() % 60, 0.0, 50.0));
    const auto a = vcs(s, {0.0, 50.0});
    const auto b = vcs(s, {0.0, 50.0});
    ASSERT_EQ(a.trials.size(), b.trials.size());
    for (std::size_t i = 0; i < a.trials.size(); ++i) {
      EXPECT_EQ(a.trials[i].subsample, b.trials[i].subsample);
      EXPECT_EQ(a.trials[i].random_times, b.trials[i].random_times);
      EXPECT_EQ(a.trials[i].t_stat, b.trials[i].t_stat);
      EXPECT_GE(a.trials[i].t_stat, 0.0);
      EXPECT_LE(a.trials[i].t_stat, 1.0);
    }
    EXPECT_EQ(a.vcs, b.vcs);
    EXPECT_GE(a.vcs, 0.0);
    EXPECT_LE(a.vcs, 0.5);
    EXPECT_EQ(a.vcs, std::abs(0.5 - a.t_mean));
  }
}

TEST(Vcs, SubsampleIsDistinctPositions) {
  std::mt19937_64 gen(2);
  const auto s = set_of(sorted_uniform(gen, 31, 0.0, 1.0));
  const auto r = vcs(s, {0.0, 1.0});
  for (const auto& trial : r.trials) {
    auto positions = trial.subsample;
    std::sort(positions.begin(), positions.end());
    EXPECT_EQ(std::adjacent_find(positions.begin(), positions.end()), positions.end());
    EXPECT_EQ(positions.size(), 15u);
    EXPECT_LT(positions.back(), 31u);
  }
}

TEST(Vcs, IdLabelsDoNotMatter) {
  std::mt19937_64 gen(4);
  auto s = set_of(sorted_uniform(gen, 40, 0.0, 10.0));
  const auto before = vcs(s, {0.0, 10.0});
  std::vector<std::string> ids;
  for (const auto& e : s.entries) ids.push_back(e.id);
  std::shuffle(ids.begin(), ids.end(), gen);
  for (std::size_t i = 0; i < ids.size(); ++i) s.entries[i].id = ids[i];
  EXPECT_EQ(vcs(s, {0.0, 10.0}).vcs, before.vcs);
}

TEST(Vcs, AffineTimeInvariance) {
  std::mt19937_64 gen(8);
  for (double a : {1e-3, 1.0, 1e3}) {
    const auto times = sorted_uniform(gen, 50, 0.0, 100.0);
    std::vector<double> mapped;
    for (double t : times) mapped.push_back(a * t + 17.0);
    const auto x = vcs(set_of(times), {0.0, 100.0});
    const auto y = vcs(set_of(mapped), {17.0, a * 100.0 + 17.0});
    for (std::size_t i = 0; i < x.trials.size(); ++i) {
      EXPECT_NEAR(x.trials[i].t_stat, y.trials[i].t_stat, 1e-12);
    }
  }
}

TEST(Vcs, MatchesBruteForceAtFullSubsample) {
  // With a fixed subsample and fixed random times the two computations must
  // agree term by term.
  std::mt19937_64 gen(12);
  for (int rep = 0; rep < 30; ++rep) {
    const auto times = sorted_uniform(gen, 3 + gen() % 40, 0.0, 20.0);
    const auto r = vcs(set_of(times), {0.0, 20.0});
    for (const auto& trial : r.trials) {
      double disg = 0.0, ref = 0.0;
      for (auto pos : trial.subsample) disg += oracle::nearest_other(times, pos);
      for (double t : trial.random_times) ref += oracle::nearest(times, t);
      EXPECT_NEAR(trial.d_disg, disg, 1e-12);
      EXPECT_NEAR(trial.d_r, ref, 1e-9);
    }
  }
}

TEST(Vcs, UniformPatternInsideOracleBand) {
  const double band = oracle::uniform_band(200, 0.0, 1000.0, 5);
  std::mt19937_64 gen(2024);
  const auto times = sorted_uniform(gen, 200, 0.0, 1000.0);
  EXPECT_LE(vcs(set_of(times), {0.0, 1000.0}).vcs, band);
}

TEST(Vcs, TauReducesVarianceOfTMean) {
  PatternSpec spec;
  spec.kind = PatternKind::Random;
  spec.seed = 1;
  const auto stream = generate_pattern(spec);
  const auto set = disagreement_set(stream, 0.5);
  auto variance = [&](std::size_t tau) {
    std::vector<double> means;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      VcsConfig c;
      c.tau = tau;
      c.seed = seed;
      means.push_back(vcs(set, period_of(stream), c).t_mean);
    }
    double m = 0.0;
    for (double x : means) m += x / static_cast<double>(means.size());
    double v = 0.0;
    for (double x : means) v += (x - m) * (x - m) / static_cast<double>(means.size() - 1);
    return v;
  };
  const double v1 = variance(1), v5 = variance(5), v25 = variance(25);
  EXPECT_GT(v1, v5);
  EXPECT_GT(v5, v25);
}
