#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "sparse_rips/generators.hpp"
#include "sparse_rips/greedy.hpp"
#include "test_util.hpp"

using namespace sparse_rips;

namespace {
// Points 0,1,2,4 on a line; point index = position in this list.
const auto kLine = test_util::line({0, 1, 2, 4});

std::set<std::size_t> as_set(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }
}  // namespace

TEST(GreedyPermutation, LineExample) {
  const auto gp = greedy_permutation(kLine, 0);
  EXPECT_EQ(gp.order, (std::vector<std::size_t>{0, 3, 2, 1}));
  ASSERT_EQ(gp.insertion_radius.size(), 4u);
  EXPECT_TRUE(std::isinf(gp.insertion_radius[0]));
  EXPECT_EQ(gp.insertion_radius[1], 4.0);
  EXPECT_EQ(gp.insertion_radius[2], 2.0);
  EXPECT_EQ(gp.insertion_radius[3], 1.0);
  EXPECT_EQ(gp.predecessor[1], 0u);
  EXPECT_EQ(gp.radius_of(1), 1.0);
}

TEST(GreedyPermutation, BaseCases) {
  const auto single = greedy_permutation(MetricInput::from_points({{3.0, 1.0}}), 0);
  EXPECT_EQ(single.order, std::vector<std::size_t>{0});
  EXPECT_TRUE(std::isinf(single.insertion_radius[0]));

  const auto pair = greedy_permutation(test_util::line({0, 7}), 0);
  EXPECT_EQ(pair.insertion_radius[1], 7.0);
  EXPECT_THROW(greedy_permutation(kLine, 4), InvalidArgument);
}

TEST(GreedyPermutation, TiesBreakTowardSmallestIndex) {
  // From the centre, all four corners are equally far.
  const auto m = MetricInput::from_points({{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}});
  const auto gp = greedy_permutation(m, 0);
  EXPECT_EQ(gp.order[1], 1u);
}

TEST(GreedyPermutation, MatchesBruteForceOnRandomInputs) {
  Random rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = MetricInput::from_points(uniform_cube(30, 2, rng));
    const std::size_t seed = rng.index(30);
    const auto gp = greedy_permutation(m, seed);
    const auto ref = oracle::brute_greedy(test_util::dense_distances(m), seed);
    EXPECT_EQ(gp.order, ref.order);
    for (std::size_t i = 1; i < gp.size(); ++i) EXPECT_EQ(gp.insertion_radius[i], ref.radius[i]);
  }
}

TEST(GreedyPermutation, Invariants) {
  Random rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto m = MetricInput::from_points(uniform_cube(40, 3, rng));
    const auto gp = greedy_permutation(m, 0);
    for (std::size_t i = 2; i < gp.size(); ++i) EXPECT_LE(gp.insertion_radius[i], gp.insertion_radius[i - 1]);
    for (std::size_t i = 1; i < gp.size(); ++i) {
      double best = oracle::inf;
      for (std::size_t j = 0; j < i; ++j) best = std::min(best, m(gp.order[i], gp.order[j]));
      EXPECT_EQ(gp.insertion_radius[i], best);
      EXPECT_EQ(m(gp.order[i], gp.predecessor[i]), best);
    }
    // prefix order[0..i] covers everything within the next radius
    for (std::size_t i = 0; i + 1 < gp.size(); ++i) {
      for (std::size_t p = 0; p < m.size(); ++p) {
        double d = oracle::inf;
        for (std::size_t j = 0; j <= i; ++j) d = std::min(d, m(p, gp.order[j]));
        EXPECT_LE(d, gp.insertion_radius[i + 1]);
      }
    }
  }
}

TEST(DeletionTimes, LineExample) {
  const auto s = deletion_times(greedy_permutation(kLine, 0), 1.0 / 3.0);
  // by point (values 0,1,2,4): t = inf, 9, 18, 36
  EXPECT_TRUE(std::isinf(s.t[0]));
  EXPECT_NEAR(s.t[1], 9.0, 1e-12);
  EXPECT_NEAR(s.t[2], 18.0, 1e-12);
  EXPECT_NEAR(s.t[3], 36.0, 1e-12);
}

TEST(DeletionTimes, EpsilonValidation) {
  const auto gp = greedy_permutation(kLine, 0);
  EXPECT_THROW(deletion_times(gp, 0.0), InvalidArgument);
  EXPECT_THROW(deletion_times(gp, 0.4), InvalidArgument);
  EXPECT_THROW(deletion_times(gp, -0.1), InvalidArgument);
  EXPECT_NO_THROW(deletion_times(gp, 1.0 / 3.0));
}

TEST(DeletionTimes, SeedIsInfiniteAnySeed) {
  Random rng(5);
  const auto m = MetricInput::from_points(uniform_cube(12, 2, rng));
  for (std::size_t seed = 0; seed < 12; ++seed) {
    const auto s = deletion_times(greedy_permutation(m, seed), 0.2);
    EXPECT_TRUE(std::isinf(s.t[seed]));
    for (std::size_t p = 0; p < 12; ++p)
      if (p != seed) {
        EXPECT_GT(s.t[p], 0.0);
      }
  }
}

TEST(NetAt, LineExamples) {
  const auto s = deletion_times(greedy_permutation(kLine, 0), 1.0 / 3.0);
  // values 0,4,2 survive at alpha = 10
  EXPECT_EQ(as_set(net_at(s, 10.0)), (std::set<std::size_t>{0, 2, 3}));
  EXPECT_EQ(net_at(s, 0.0).size(), 4u);
  // alpha = 9.0 sits on t of the point at value 1 (computed as 1 / (1/9))
  const double t1 = s.t[1];
  EXPECT_EQ(as_set(net_at(s, t1, false)), (std::set<std::size_t>{0, 2, 3}));
  EXPECT_EQ(as_set(net_at(s, t1, true)), (std::set<std::size_t>{0, 1, 2, 3}));
  EXPECT_THROW(net_at(s, -1.0), InvalidArgument);
}

TEST(NetAt, IsAGreedyPrefix) {
  Random rng(9);
  const auto m = MetricInput::from_points(uniform_cube(50, 2, rng));
  const auto gp = greedy_permutation(m, 0);
  const auto s = deletion_times(gp, 0.25);
  for (int i = 0; i < 30; ++i) {
    const double alpha = rng.uniform(0.0, 20.0);
    const auto net = net_at(s, alpha);
    ASSERT_FALSE(net.empty());
    EXPECT_TRUE(std::equal(net.begin(), net.end(), gp.order.begin()));
  }
}

TEST(CheckNetConditions, LineExample) {
  const auto s = deletion_times(greedy_permutation(kLine, 0), 1.0 / 3.0);
  const auto r = check_net_conditions(kLine, s, 10.0);
  EXPECT_TRUE(r.cover_ok);
  EXPECT_TRUE(r.pack_ok);
  EXPECT_NEAR(r.bound, 10.0 / 9.0, 1e-12);
  EXPECT_EQ(r.worst_cover, 1.0);
  EXPECT_EQ(r.cover_witness, 1u);
  EXPECT_EQ(r.worst_pack, 2.0);
  EXPECT_EQ(r.net_size, 3u);

  const auto zero = check_net_conditions(kLine, s, 0.0);
  EXPECT_TRUE(zero.ok());
}

TEST(CheckNetConditions, HoldsOnRandomInstances) {
  Random rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = MetricInput::from_points(uniform_cube(40, 2, rng));
    for (double eps : {0.1, 0.25, 1.0 / 3.0}) {
      const auto s = deletion_times(greedy_permutation(m, 0), eps);
      for (int i = 0; i < 10; ++i) {
        const double alpha = rng.uniform(0.0, 1.5 / s.scale());
        const auto r = check_net_conditions(m, s, alpha);
        EXPECT_TRUE(r.ok()) << "alpha=" << alpha;
        EXPECT_GT(r.packing_ratio(), 1.0);
        EXPECT_FALSE(find_strong_cover_violation(m, s, alpha).has_value());
      }
    }
  }
}

TEST(CheckNetConditions, HalvedScheduleFailsCovering) {
  Random rng(4);
  const auto m = MetricInput::from_points(uniform_cube(30, 2, rng));
  auto s = deletion_times(greedy_permutation(m, 0), 1.0 / 3.0);
  for (auto& t : s.t) t *= 0.5;
  bool caught = false;
  for (int i = 0; i < 20 && !caught; ++i) {
    const auto r = check_net_conditions(m, s, rng.uniform(0.0, 10.0));
    if (!r.cover_ok) {
      caught = true;
      EXPECT_GT(r.worst_cover, r.bound);
      EXPECT_LT(r.cover_witness, m.size());
    }
  }
  EXPECT_TRUE(caught);
}

TEST(ScheduleCsv, Format) {
  const auto gp = greedy_permutation(kLine, 0);
  const auto s = deletion_times(gp, 1.0 / 3.0);
  std::ostringstream os;
  write_schedule_csv(os, gp, s);
  const std::string text = os.str();
  EXPECT_EQ(text.rfind("index,greedy_position,insertion_radius,deletion_time\n0,0,inf,inf\n", 0), 0u);
  EXPECT_NE(text.find("\n3,1,4,"), std::string::npos);
}
