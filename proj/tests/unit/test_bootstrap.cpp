#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "test_helpers.hpp"
#include "volnet/bootstrap.hpp"
#include "volnet/parallel.hpp"
#include "volnet/synthetic.hpp"

using namespace volnet;

namespace {

SyntheticSpec pair_spec(Eigen::Index n, std::uint64_t seed) {
  SyntheticSpec s;
  s.assets = {"A", "B"};
  s.length = n;
  s.own = {{0.1, 0.4, 0.3, 0.2}, {0.1, 0.4, 0.3, 0.2}};
  s.innovation_cov.resize(2, 2);
  s.innovation_cov << 1e-4, 0.5e-4, 0.5e-4, 1e-4;
  s.seed = seed;
  return s;
}

RvPanel counting_panel(Eigen::Index n) {
  RvPanel p;
  p.assets = {"A", "B"};
  p.values.resize(n, 2);
  Date d = Date::from_ymd(2020, 1, 6);
  for (Eigen::Index t = 0; t < n; ++t) {
    p.values(t, 0) = static_cast<double>(t);
    p.values(t, 1) = static_cast<double>(-t);
    p.dates.push_back(d);
    d = d.next_weekday();
  }
  return p;
}

struct Fitted {
  RvPanel rv;
  HybridModel model;
};

const Fitted& fitted_pair() {
  static const Fitted f = [] {
    Fitted out;
    out.rv = generate_synthetic_panel(pair_spec(600, 3));
    out.model = fit_hybrid(out.rv).model;
    return out;
  }();
  return f;
}

const std::vector<ShockGroup> kGroups{{"A", {"A"}}};

}  // namespace

TEST(BlockResample, FullLengthBlockIsIdentity) {
  const RvPanel p = counting_panel(120);
  Rng rng(5);
  std::vector<Eigen::Index> starts;
  const RvPanel r = block_resample(p, 120, rng, &starts);
  EXPECT_EQ(r.values, p.values);
  EXPECT_EQ(r.dates, p.dates);
  EXPECT_EQ(starts, std::vector<Eigen::Index>{0});
}

TEST(BlockResample, BlocksAreContiguousRuns) {
  const RvPanel p = counting_panel(203);
  Rng rng(9);
  std::vector<Eigen::Index> starts;
  const RvPanel r = block_resample(p, 20, rng, &starts);
  ASSERT_EQ(r.values.rows(), 203);
  EXPECT_EQ(r.dates, p.dates);
  ASSERT_EQ(starts.size(), 11u);
  for (std::size_t b = 0; b < starts.size(); ++b) {
    EXPECT_EQ(starts[b], static_cast<Eigen::Index>(20 * b));
    const Eigen::Index end = b + 1 < starts.size() ? starts[b + 1] : 203;
    const double first = r.values(starts[b], 0);
    EXPECT_LE(first, 203.0 - 20.0);
    for (Eigen::Index t = starts[b]; t < end; ++t) {
      EXPECT_EQ(r.values(t, 0), first + static_cast<double>(t - starts[b]));
      EXPECT_EQ(r.values(t, 1), -r.values(t, 0));
    }
  }
}

TEST(BlockResample, SeedDeterminism) {
  const RvPanel p = counting_panel(300);
  Rng a(1), b(1), c(2);
  const RvPanel ra = block_resample(p, 25, a);
  EXPECT_EQ(ra.values, block_resample(p, 25, b).values);
  EXPECT_NE(ra.values, block_resample(p, 25, c).values);
}

TEST(BlockResample, RejectsShortPanel) {
  const RvPanel p = counting_panel(30);
  Rng rng(1);
  EXPECT_VOLNET_ERROR(block_resample(p, 31, rng), ErrorCode::kPanelTooShort);
}

TEST(Percentile, MatchesLinearInterpolation) {
  std::vector<double> v(11);
  std::iota(v.begin(), v.end(), 0.0);
  EXPECT_EQ(percentile_sorted(v, 0.0), 0.0);
  EXPECT_EQ(percentile_sorted(v, 1.0), 10.0);
  EXPECT_NEAR(percentile_sorted(v, 0.025), 0.25, 1e-15);
  EXPECT_NEAR(percentile_sorted(v, 0.975), 9.75, 1e-15);
  const std::vector<double> one{3.5};
  EXPECT_EQ(percentile_sorted(one, 0.025), 3.5);
  EXPECT_EQ(percentile_sorted(one, 0.975), 3.5);
}

TEST(BootstrapConfig, Validation) {
  EXPECT_VOLNET_ERROR(validate(BootstrapConfig{.block_length = 0}), ErrorCode::kInvalidArgument);
  EXPECT_VOLNET_ERROR(validate(BootstrapConfig{.replications = 0}), ErrorCode::kInvalidArgument);
  EXPECT_VOLNET_ERROR(validate(BootstrapConfig{.ci_level = 1.0}), ErrorCode::kInvalidArgument);
}

TEST(BootstrapJirf, SingleReplicateCollapsesBand) {
  const Fitted& f = fitted_pair();
  const JirfBand b = bootstrap_jirf(f.rv, f.model, kGroups, 10, {.replications = 1, .seed = 4});
  ASSERT_EQ(b.replications, 1u);
  EXPECT_EQ(b.lower[0], b.upper[0]);
}

TEST(BootstrapJirf, BandsOrderedAndShaped) {
  const Fitted& f = fitted_pair();
  const JirfBand b = bootstrap_jirf(f.rv, f.model, kGroups, 20, {.replications = 60, .seed = 7});
  ASSERT_EQ(b.point.size(), 1u);
  EXPECT_EQ(b.point[0].rows(), 21);
  EXPECT_EQ(b.point[0].cols(), 2);
  EXPECT_TRUE((b.lower[0].array() <= b.upper[0].array()).all());
  EXPECT_EQ(b.point[0], compute_jirfs(f.model, kGroups, 20)[0].responses);
  EXPECT_EQ(b.replications + b.failures, 60u);
}

TEST(BootstrapJirf, ThreadCountDoesNotChangeResult) {
  const Fitted& f = fitted_pair();
  const BootstrapConfig cfg{.replications = 24, .seed = 11};
  set_thread_count(1);
  const JirfBand one = bootstrap_jirf(f.rv, f.model, kGroups, 15, cfg);
  set_thread_count(4);
  const JirfBand four = bootstrap_jirf(f.rv, f.model, kGroups, 15, cfg);
  set_thread_count(0);
  EXPECT_EQ(one.lower[0], four.lower[0]);
  EXPECT_EQ(one.upper[0], four.upper[0]);
}

TEST(BootstrapJirf, OffDiagonalBandWidensWithHorizonEarly) {
  // The response of B starts from a conditional mean and accumulates
  // parameter uncertainty over the first steps.
  const Fitted& f = fitted_pair();
  const JirfBand b = bootstrap_jirf(f.rv, f.model, kGroups, 5, {.replications = 100, .seed = 2});
  const Eigen::VectorXd width = b.upper[0].col(0) - b.lower[0].col(0);
  EXPECT_GT(width(5), width(0));
}
