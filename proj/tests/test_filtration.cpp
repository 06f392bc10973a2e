#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "sparse_rips/filtration.hpp"
#include "sparse_rips/generators.hpp"
#include "test_util.hpp"

using namespace sparse_rips;

namespace {

using SimplexMap = std::map<std::vector<Vertex>, double>;

SimplexMap to_map(const SparseFiltration& f) {
  SimplexMap out;
  for (const auto& s : f.simplices) out[s.vertices] = s.value;
  return out;
}

std::size_t count_dim(const SparseFiltration& f, int d, double value) {
  return static_cast<std::size_t>(std::count_if(f.simplices.begin(), f.simplices.end(), [&](const auto& s) {
    return s.dimension() == d && std::abs(s.value - value) < 1e-12;
  }));
}

WeightContext context_for(const MetricInput& m, double eps) {
  return WeightContext(m, deletion_times(greedy_permutation(m, 0), eps));
}

}  // namespace

TEST(CliqueExpand, TriangleTakesLargestEdge) {
  const std::vector<WeightedEdge> edges{{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 3.0}};
  const auto f = clique_expand(edges, 3, 2);
  ASSERT_EQ(f.size(), 7u);
  EXPECT_EQ(f.simplices.back().vertices, (std::vector<Vertex>{0, 1, 2}));
  EXPECT_EQ(f.simplices.back().value, 3.0);
  EXPECT_NO_THROW(validate_filtration(f));
}

TEST(CliqueExpand, PathHasNoTriangles) {
  const std::vector<WeightedEdge> edges{{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}};
  const auto counts = clique_expand(edges, 4, 2).counts_by_dimension();
  EXPECT_EQ(counts, (std::vector<std::size_t>{4, 3, 0}));
}

TEST(CliqueExpand, UnitSquare) {
  const auto m = test_util::unit_square();
  std::vector<WeightedEdge> edges;
  for (Vertex p = 0; p < 4; ++p)
    for (Vertex q = p + 1; q < 4; ++q) edges.push_back({p, q, m(p, q)});
  const auto f = clique_expand(edges, 4, 2);
  EXPECT_EQ(count_dim(f, 1, 1.0), 4u);
  EXPECT_EQ(count_dim(f, 1, std::sqrt(2.0)), 2u);
  EXPECT_EQ(count_dim(f, 2, std::sqrt(2.0)), 4u);
  EXPECT_EQ(f.size(), 14u);
  EXPECT_THROW(clique_expand(edges, 4, 0), InvalidArgument);
}

TEST(CliqueExpand, MatchesBruteForceOnRandomGraphs) {
  Random rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 9;
    std::map<std::pair<std::size_t, std::size_t>, double> w;
    std::vector<WeightedEdge> edges;
    for (Vertex p = 0; p < n; ++p)
      for (Vertex q = p + 1; q < n; ++q)
        if (rng.uniform() < 0.6) {
          const double b = std::floor(rng.uniform(0, 10));
          w[{p, q}] = b;
          edges.push_back({p, q, b});
        }
    std::vector<double> limit(n);
    for (auto& x : limit) x = rng.uniform() < 0.2 ? kInfinity : rng.uniform(0, 12);
    CliqueOptions opts;
    opts.vertex_limit = limit;
    const auto f = clique_expand(edges, n, 3, opts);
    EXPECT_NO_THROW(validate_filtration(f));

    auto brute = oracle::brute_cliques(
        n, 3, [&](std::size_t a, std::size_t b) { return w.count({a, b}) > 0; },
        [&](std::size_t a, std::size_t b) { return w.at({a, b}); });
    SimplexMap want;
    for (const auto& s : brute) {
      double lim = kInfinity;
      for (auto v : s.v) lim = std::min(lim, limit[v]);
      if (s.v.size() == 1 || s.value <= lim) want[{s.v.begin(), s.v.end()}] = s.value;
    }
    EXPECT_EQ(to_map(f), want);
  }
}

TEST(FullRips, Examples) {
  const auto sq = full_rips(test_util::unit_square(), 2.0, 2);
  EXPECT_EQ(count_dim(sq, 1, 1.0), 4u);
  EXPECT_EQ(count_dim(sq, 1, std::sqrt(2.0)), 2u);
  EXPECT_EQ(count_dim(sq, 2, std::sqrt(2.0)), 4u);
  EXPECT_EQ(sq.kind, FiltrationKind::full_rips);
  ASSERT_TRUE(sq.alpha_max.has_value());

  const auto far = full_rips(test_util::line({0, 3}), 2.0, 1);
  EXPECT_EQ(far.size(), 2u);

  const auto tri = full_rips(MetricInput::from_matrix({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}), 5.0, 2);
  EXPECT_EQ(count_dim(tri, 1, 1.0), 3u);
  EXPECT_EQ(count_dim(tri, 2, 1.0), 1u);
  EXPECT_THROW(full_rips(tri.simplices.empty() ? test_util::unit_square() : test_util::unit_square(), 0.0, 2),
               InvalidArgument);
}

TEST(RelaxedRips, InfiniteTimesEqualFullRips) {
  Random rng(12);
  const auto m = MetricInput::from_points(uniform_cube(10, 2, rng));
  const WeightContext ctx(m, DeletionSchedule{0.2, std::vector<double>(10, kInfinity), {}});
  EXPECT_EQ(to_map(relaxed_rips(m, ctx, 10.0, 2)), to_map(full_rips(m, 10.0, 2)));
}

TEST(RelaxedRips, TwoPointExample) {
  const auto m = test_util::line({0, 5});
  const WeightContext ctx(m, DeletionSchedule{1.0 / 3.0, {kInfinity, 9.0}, {0, 1}});
  const auto f = relaxed_rips(m, ctx, 100.0, 1);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_DOUBLE_EQ(f.simplices.back().value, 7.0);
}

TEST(SparseEdges, Examples) {
  {
    const auto m = test_util::line({0, 5});
    const WeightContext ctx(m, DeletionSchedule{1.0 / 3.0, {kInfinity, 9.0}, {0, 1}});
    const auto e = sparse_edges(m, ctx);
    ASSERT_EQ(e.size(), 1u);
    EXPECT_DOUBLE_EQ(e[0].birth, 7.0);
  }
  {
    const auto m = test_util::line({0, 20});
    const WeightContext ctx(m, DeletionSchedule{1.0 / 3.0, {kInfinity, 9.0}, {0, 1}});
    EXPECT_TRUE(sparse_edges(m, ctx).empty());
  }
  {
    const auto m = test_util::unit_square();
    const WeightContext ctx(m, DeletionSchedule{0.1, std::vector<double>(4, kInfinity), {}});
    const auto e = sparse_edges(m, ctx);
    ASSERT_EQ(e.size(), 6u);
    for (const auto& x : e) EXPECT_EQ(x.birth, m(x.p, x.q));
  }
}

TEST(BuildSparse, SinglePoint) {
  const auto f = build_sparse(MetricInput::from_points({{1.0, 2.0}}), 0.1, 2);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f.simplices[0].value, 0.0);
  EXPECT_EQ(f.kind, FiltrationKind::sparse_S);
}

TEST(BuildSparse, LineExampleMatchesHandComposition) {
  const auto m = test_util::line({0, 1, 2, 4});
  const double eps = 1.0 / 3.0;
  const auto f = build_sparse(m, eps, 1);
  // t by point: inf, 9, 18, 36; edges admitted when birth <= min t
  const std::vector<double> t{oracle::inf, 9, 18, 36};
  SimplexMap want;
  for (Vertex v = 0; v < 4; ++v) want[{v}] = 0.0;
  for (Vertex p = 0; p < 4; ++p)
    for (Vertex q = p + 1; q < 4; ++q) {
      const double b = oracle::bisect_edge_birth(eps, m(p, q), t[p], t[q]);
      if (b <= std::min(t[p], t[q])) want[{p, q}] = b;
    }
  const auto got = to_map(f);
  ASSERT_EQ(got.size(), want.size());
  for (const auto& [s, v] : want) EXPECT_NEAR(got.at(s), v, 1e-12);
  // every pair is close enough here for the edge to survive
  EXPECT_EQ(f.counts_by_dimension(), (std::vector<std::size_t>{4, 6}));
}

TEST(BuildSparse, TinyEpsilonGivesFullRips) {
  Random rng(13);
  const auto m = MetricInput::from_points(uniform_cube(12, 2, rng));
  const auto gp = greedy_permutation(m, 0);
  const double min_radius = gp.insertion_radius.back();
  const double eps = 0.5 * min_radius / m.diameter();
  const auto f = build_sparse(m, eps, 2);
  EXPECT_EQ(to_map(f), to_map(full_rips(m, 2 * m.diameter(), 2)));
}

TEST(BuildSparse, MatchesBruteForceDefinition) {
  // sigma is in S iff (max relaxed edge birth) <= (min deletion time); value = that max.
  Random rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = MetricInput::from_points(uniform_cube(10, 2, rng));
    const double eps = trial % 2 ? 0.1 : 1.0 / 3.0;
    const auto b = build_sparse_detailed(m, eps, 3);
    const auto& t = b.schedule.t;
    auto birth = [&](std::size_t p, std::size_t q) { return oracle::bisect_edge_birth(eps, m(p, q), t[p], t[q]); };
    auto brute = oracle::brute_cliques(
        10, 3, [](std::size_t, std::size_t) { return true; }, birth);
    SimplexMap want;
    for (const auto& s : brute) {
      double lim = kInfinity;
      for (auto v : s.v) lim = std::min(lim, t[v]);
      if (s.value <= lim) want[{s.v.begin(), s.v.end()}] = s.value;
    }
    const auto got = to_map(b.filtration);
    ASSERT_EQ(got.size(), want.size());
    for (const auto& [s, v] : want) {
      ASSERT_TRUE(got.count(s));
      EXPECT_NEAR(got.at(s), v, 1e-12);
    }
  }
}

TEST(BuildSparse, RejectsDuplicatesAndBadParameters) {
  const auto dup = MetricInput::from_points({{0, 0}, {1, 1}, {0, 0}});
  EXPECT_THROW(build_sparse(dup, 0.1, 2), InvalidArgument);
  EXPECT_NO_THROW(build_sparse(deduplicate(dup).metric, 0.1, 2));
  EXPECT_THROW(build_sparse(test_util::unit_square(), 0.5, 2), InvalidArgument);
  EXPECT_THROW(build_sparse(test_util::unit_square(), 0.1, 0), InvalidArgument);
}

TEST(Filtrations, ValidityAndInclusions) {
  Random rng(15);
  for (int trial = 0; trial < 8; ++trial) {
    const auto m = MetricInput::from_points(uniform_cube(14, 2, rng));
    const double eps = trial % 2 ? 0.25 : 1.0 / 3.0;
    const auto ctx = context_for(m, eps);
    const double alpha_max = 0.8;
    const auto sparse = build_sparse(m, eps, 2);
    const auto relaxed_all = relaxed_rips(m, ctx, kInfinity, 2);
    const auto relaxed = relaxed_rips(m, ctx, alpha_max, 2);
    const auto full = full_rips(m, alpha_max, 2);
    for (const auto* f : {&sparse, &relaxed_all, &relaxed, &full}) EXPECT_NO_THROW(validate_filtration(*f));

    // vertices all at 0
    for (const auto& s : sparse.simplices)
      if (s.dimension() == 0) {
        EXPECT_EQ(s.value, 0.0);
      }

    // sparse is a sub-filtration of relaxed with identical values
    const auto rmap = to_map(relaxed_all);
    for (const auto& s : sparse.simplices) {
      ASSERT_TRUE(rmap.count(s.vertices));
      EXPECT_EQ(rmap.at(s.vertices), s.value);
    }
    // relaxed edges at value v have d <= v
    for (const auto& s : relaxed.simplices)
      if (s.dimension() == 1) {
        EXPECT_LE(m(s.vertices[0], s.vertices[1]), s.value);
      }
    // full Rips simplices at v <= (1-2eps) alpha_max appear in relaxed by v / (1 - 2 eps)
    const auto tmap = to_map(relaxed);
    for (const auto& s : full.simplices) {
      if (s.value > (1 - 2 * eps) * alpha_max) continue;
      ASSERT_TRUE(tmap.count(s.vertices));
      EXPECT_LE(tmap.at(s.vertices), s.value / (1 - 2 * eps) * (1 + 1e-12));
    }
  }
}

TEST(BuildSparse, ForwardDegreeDoesNotGrowWithN) {
  auto mean_max_degree = [](std::size_t n) {
    double total = 0.0;
    for (std::uint64_t trial = 0; trial < 5; ++trial) {
      Random rng(500 + 31 * n + trial);
      const auto b = build_sparse_detailed(MetricInput::from_points(uniform_cube(n, 2, rng)), 1.0 / 3.0, 1);
      total += static_cast<double>(b.max_forward_degree());
    }
    return total / 5.0;
  };
  const double small = mean_max_degree(250);
  const double large = mean_max_degree(1000);
  EXPECT_LE(std::abs(large - small), 0.2 * small) << small << " vs " << large;
}

TEST(StaticComplex, Examples) {
  const auto m = test_util::line({0, 1, 2, 4});
  const auto ctx = context_for(m, 1.0 / 3.0);
  const auto low = static_complex(m, ctx, 0.5, StaticKind::relaxed_full, 2);
  EXPECT_EQ(low.simplices.size(), 4u);

  const auto open9 = static_complex(m, ctx, 9.0, StaticKind::Q_open, 1);
  const auto closed9 = static_complex(m, ctx, 9.0, StaticKind::Q_closed, 1);
  auto has_vertex = [](const StaticComplex& c, Vertex v) {
    return std::find(c.simplices.begin(), c.simplices.end(), std::vector<Vertex>{v}) != c.simplices.end();
  };
  EXPECT_FALSE(has_vertex(open9, 1));
  EXPECT_TRUE(has_vertex(closed9, 1));

  const auto open10 = static_complex(m, ctx, 10.0, StaticKind::Q_open, 2);
  const auto closed10 = static_complex(m, ctx, 10.0, StaticKind::Q_closed, 2);
  EXPECT_EQ(open10.simplices, closed10.simplices);
}

TEST(StaticComplex, OpenNetIsInducedSubcomplex) {
  Random rng(16);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = MetricInput::from_points(uniform_cube(12, 2, rng));
    const auto ctx = context_for(m, 0.25);
    const double alpha = rng.uniform(0.0, 3.0);
    const auto q = static_complex(m, ctx, alpha, StaticKind::Q_open, 3);
    const auto full = static_complex(m, ctx, alpha, StaticKind::relaxed_full, 3);
    const auto net = net_at(ctx.schedule(), alpha);
    const std::set<Vertex> in_net(net.begin(), net.end());
    std::vector<std::vector<Vertex>> induced;
    for (const auto& s : full.simplices)
      if (std::all_of(s.begin(), s.end(), [&](Vertex v) { return in_net.count(v) > 0; })) induced.push_back(s);
    EXPECT_EQ(q.simplices, induced);
  }
}

TEST(FiltrationText, RoundTrip) {
  Random rng(18);
  const auto m = MetricInput::from_points(uniform_cube(15, 2, rng));
  const auto f = build_sparse(m, 0.2, 2);
  std::stringstream ss;
  write_filtration(ss, f);
  const auto g = read_filtration(ss);
  EXPECT_EQ(g.k, 2);
  EXPECT_EQ(g.kind, FiltrationKind::sparse_S);
  ASSERT_EQ(g.size(), f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_EQ(g.simplices[i].vertices, f.simplices[i].vertices);
    EXPECT_EQ(g.simplices[i].value, f.simplices[i].value);
  }
}

TEST(FiltrationText, Validation) {
  std::istringstream missing("0 0\n0 1\n1 0 2\n");
  const auto f = read_filtration(missing);
  try {
    validate_filtration(f);
    FAIL();
  } catch (const FiltrationError& e) {
    EXPECT_NE(std::string(e.what()).find("[0 2]"), std::string::npos);
  }
  std::istringstream junk("0 0\nabc 1\n");
  EXPECT_THROW(read_filtration(junk), ParseError);
}
