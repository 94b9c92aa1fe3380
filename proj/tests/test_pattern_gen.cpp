#include <gtest/gtest.h>

#include "vcs_oracle.hpp"
#include "volclust/error.hpp"
#include "volclust/pattern_gen.hpp"
#include "volclust/vcs.hpp"

using namespace volclust;

namespace {

PatternSpec pattern(PatternKind kind, std::uint64_t seed) {
  PatternSpec spec;
  spec.kind = kind;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST(GeneratePattern, RegularPlacement) {
  PatternSpec spec = pattern(PatternKind::Regular, 0);
  spec.n_events = 4;
  spec.n_errors = 4;
  spec.period = {0.0, 8.0};
  const auto set = disagreement_set(generate_pattern(spec), 0.5);
  EXPECT_EQ(set.timestamps(), (std::vector<double>{1.0, 3.0, 5.0, 7.0}));
}

TEST(GeneratePattern, RegularGapsAreEqual) {
  const auto stream = generate_pattern(pattern(PatternKind::Regular, 3));
  const auto t = disagreement_set(stream, 0.5).timestamps();
  ASSERT_EQ(t.size(), 200u);
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_NEAR(t[i] - t[i - 1], 5.0, 1e-9);
}

TEST(GeneratePattern, ClusterContainment) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto t = disagreement_set(generate_pattern(pattern(PatternKind::Clustered, seed)), 0.5)
                       .timestamps();
    ASSERT_EQ(t.size(), 200u);
    for (double x : t) {
      EXPECT_GE(x, 890.0);
      EXPECT_LE(x, 910.0);
    }
  }
}

TEST(GeneratePattern, DeterministicAndWellFormed) {
  for (auto kind : {PatternKind::Random, PatternKind::Clustered, PatternKind::Regular}) {
    const auto a = generate_pattern(pattern(kind, 17));
    EXPECT_EQ(a, generate_pattern(pattern(kind, 17)));
    EXPECT_NE(a, generate_pattern(pattern(kind, 18)));
    EXPECT_EQ(a.size(), 2000u);
    EXPECT_EQ(disagreement_set(a, 0.5).size(), 200u);
    EXPECT_GE(a.t_start(), 0.0);
    EXPECT_LE(a.t_end(), 1000.0);
  }
}

TEST(GeneratePattern, SpecViolations) {
  auto rejects = [](PatternSpec spec) {
    try {
      generate_pattern(spec);
    } catch (const Error& e) {
      return e.code() == ErrorCode::SpecViolation;
    }
    return false;
  };
  PatternSpec s;
  s.n_errors = 1;
  EXPECT_TRUE(rejects(s));
  s = {};
  s.n_errors = 3000;
  EXPECT_TRUE(rejects(s));
  s = {};
  s.period = {5.0, 5.0};
  EXPECT_TRUE(rejects(s));
  s = {};
  s.cluster_width = 0.0;
  EXPECT_TRUE(rejects(s));
  EXPECT_THROW(parse_pattern_kind("bursty"), Error);
  EXPECT_EQ(parse_pattern_kind("regular"), PatternKind::Regular);
}

TEST(GeneratePattern, PatternsSeparateFromUniformBand) {
  const double band = oracle::uniform_band(200, 0.0, 1000.0, 5);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    for (auto kind : {PatternKind::Random, PatternKind::Clustered, PatternKind::Regular}) {
      const auto s = generate_pattern(pattern(kind, seed));
      const auto r = vcs(disagreement_set(s, 0.5), period_of(s));
      if (kind == PatternKind::Random) {
        EXPECT_LE(r.vcs, band);
      } else {
        EXPECT_GT(r.vcs, band);
        EXPECT_EQ(r.signed_deviation() > 0, kind == PatternKind::Clustered);
      }
    }
  }
}

TEST(GenerateDriftDataset, DeterministicShapes) {
  DriftSpec spec;
  spec.seed = 5;
  const auto a = generate_drift_dataset(spec);
  const auto b = generate_drift_dataset(spec);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.t, b.t);
  EXPECT_EQ(a.size(), spec.n_events);
  EXPECT_EQ(a.dim(), spec.feature_dim);
  EXPECT_TRUE(std::is_sorted(a.t.begin(), a.t.end()));
}

TEST(GenerateDriftDataset, ShiftMovesClassOneAfterOnset) {
  DriftSpec spec;
  spec.n_events = 4000;
  const auto d = generate_drift_dataset(spec);
  double before = 0.0, after = 0.0;
  std::size_t nb = 0, na = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.y[i] != 1) continue;
    if (d.t[i] < 800.0) {
      before += d.features[i][0];
      ++nb;
    } else {
      after += d.features[i][0];
      ++na;
    }
  }
  EXPECT_NEAR(before / nb - after / na, spec.drift_shift, 0.3);
}

TEST(GenerateDriftDataset, SpecViolations) {
  DriftSpec spec;
  spec.drift_onset = 1.0;
  EXPECT_THROW(generate_drift_dataset(spec), Error);
  spec = {};
  spec.feature_dim = 0;
  EXPECT_THROW(generate_drift_dataset(spec), Error);
}
