#ifndef SPARSE_RIPS_FILTRATION_HPP
#define SPARSE_RIPS_FILTRATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sparse_rips/error.hpp"
#include "sparse_rips/greedy.hpp"
#include "sparse_rips/metric.hpp"
#include "sparse_rips/relaxed.hpp"

namespace sparse_rips {

using Vertex = std::uint32_t;

struct FilteredSimplex {
  /// Strictly increasing.
  std::vector<Vertex> vertices;
  double value = 0.0;

  int dimension() const noexcept { return static_cast<int>(vertices.size()) - 1; }
};

/// Filtration order: value, then dimension, then vertices lexicographically.
/// Faces sort before cofaces even at equal values.
inline bool filtration_less(const FilteredSimplex& a, const FilteredSimplex& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
  return a.vertices < b.vertices;
}

enum class FiltrationKind { sparse_S, full_rips, relaxed_rips, custom };

inline std::string_view to_string(FiltrationKind kind) {
  switch (kind) {
    case FiltrationKind::sparse_S: return "sparse_S";
    case FiltrationKind::full_rips: return "full_rips";
    case FiltrationKind::relaxed_rips: return "relaxed_rips";
    case FiltrationKind::custom: return "custom";
  }
  return "custom";
}

inline FiltrationKind parse_filtration_kind(std::string_view s) {
  if (s == "sparse_S") return FiltrationKind::sparse_S;
  if (s == "full_rips") return FiltrationKind::full_rips;
  if (s == "relaxed_rips") return FiltrationKind::relaxed_rips;
  return FiltrationKind::custom;
}

struct SparseFiltration {
  std::vector<FilteredSimplex> simplices;
  /// Simplices have dimension at most k.
  int k = 1;
  FiltrationKind kind = FiltrationKind::custom;
  std::optional<double> alpha_max;

  std::size_t size() const noexcept { return simplices.size(); }

  /// Number of simplices of each dimension 0..k.
  std::vector<std::size_t> counts_by_dimension() const {
    std::vector<std::size_t> counts(static_cast<std::size_t>(k) + 1, 0);
    for (const auto& s : simplices) {
      const auto d = static_cast<std::size_t>(s.dimension());
      if (d >= counts.size()) counts.resize(d + 1, 0);
      ++counts[d];
    }
    return counts;
  }

  void sort() { std::sort(simplices.begin(), simplices.end(), filtration_less); }
};

struct VertexListHash {
  std::size_t operator()(const std::vector<Vertex>& v) const noexcept {
    std::size_t h = v.size();
    for (Vertex x : v) h ^= std::hash<Vertex>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

/// Checks sortedness, vertex order, and that every codimension-1 face appears
/// earlier with a value no larger. Throws FiltrationError naming the offender.
inline void validate_filtration(const SparseFiltration& f) {
  std::unordered_map<std::vector<Vertex>, double, VertexListHash> seen;
  seen.reserve(f.size());
  auto describe = [](const FilteredSimplex& s) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < s.vertices.size(); ++i) os << (i ? " " : "") << s.vertices[i];
    os << "] at value " << s.value;
    return os.str();
  };
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const auto& s = f.simplices[idx];
    if (s.vertices.empty()) throw FiltrationError("empty simplex at position " + std::to_string(idx));
    if (!std::isfinite(s.value) || s.value < 0.0)
      throw FiltrationError("simplex " + describe(s) + " has an invalid value");
    if (s.dimension() > f.k)
      throw FiltrationError("simplex " + describe(s) + " exceeds dimension cap " + std::to_string(f.k));
    for (std::size_t i = 1; i < s.vertices.size(); ++i)
      if (s.vertices[i - 1] >= s.vertices[i])
        throw FiltrationError("simplex " + describe(s) + " has unsorted or repeated vertices");
    if (idx > 0 && filtration_less(s, f.simplices[idx - 1]))
      throw FiltrationError("simplex " + describe(s) + " is out of filtration order");
    if (s.vertices.size() > 1) {
      std::vector<Vertex> face(s.vertices.size() - 1);
      for (std::size_t skip = 0; skip < s.vertices.size(); ++skip) {
        for (std::size_t i = 0, j = 0; i < s.vertices.size(); ++i)
          if (i != skip) face[j++] = s.vertices[i];
        auto it = seen.find(face);
        if (it == seen.end()) throw FiltrationError("simplex " + describe(s) + " is missing a face");
        if (it->second > s.value) throw FiltrationError("simplex " + describe(s) + " precedes one of its faces");
      }
    }
    if (!seen.emplace(s.vertices, s.value).second)
      throw FiltrationError("simplex " + describe(s) + " appears twice");
  }
}

struct WeightedEdge {
  Vertex p;
  Vertex q;
  double birth;
};

namespace detail {

/// Oriented adjacency used for clique enumeration: each vertex only lists
/// neighbours of higher rank, sorted by rank, with the edge birth attached.
struct OrientedGraph {
  std::vector<std::size_t> rank;
  std::vector<std::vector<std::pair<Vertex, double>>> out;
};

inline OrientedGraph orient(std::span<const WeightedEdge> edges, std::size_t n, std::vector<std::size_t> rank) {
  OrientedGraph g;
  g.rank = std::move(rank);
  g.out.resize(n);
  for (const auto& e : edges) {
    if (e.p == e.q) continue;
    if (g.rank[e.p] < g.rank[e.q])
      g.out[e.p].emplace_back(e.q, e.birth);
    else
      g.out[e.q].emplace_back(e.p, e.birth);
  }
  for (auto& list : g.out)
    std::sort(list.begin(), list.end(), [&](const auto& a, const auto& b) { return g.rank[a.first] < g.rank[b.first]; });
  return g;
}

struct ExpansionLimits {
  int k = 1;
  double alpha_max = kInfinity;
  /// Per-vertex admission bound: a simplex is kept only if its value does not
  /// exceed the smallest bound among its vertices.
  std::span<const double> vertex_limit;
};

/// Calls emit(vertices-in-rank-order, value) for every clique of dimension
/// 1..k admitted by `limits`. Vertices themselves are not emitted.
template <typename Emit>
void expand_cliques(const OrientedGraph& g, const ExpansionLimits& limits, Emit&& emit) {
  using Candidate = std::pair<Vertex, double>;
  std::vector<Vertex> stack;
  auto limit_of = [&](Vertex v) { return limits.vertex_limit.empty() ? kInfinity : limits.vertex_limit[v]; };

  std::function<void(double, double, const std::vector<Candidate>&)> grow =
      [&](double value, double bound, const std::vector<Candidate>& candidates) {
        for (std::size_t i = 0; i < candidates.size(); ++i) {
          const auto [v, reach] = candidates[i];
          const double next_value = std::max(value, reach);
          const double next_bound = std::min(bound, limit_of(v));
          if (next_value > limits.alpha_max || next_value > next_bound) continue;
          stack.push_back(v);
          emit(std::span<const Vertex>(stack), next_value);
          if (static_cast<int>(stack.size()) <= limits.k) {
            // Intersect the remaining candidates with v's out-neighbours (both rank-sorted).
            std::vector<Candidate> next;
            const auto& out = g.out[v];
            std::size_t a = i + 1, b = 0;
            while (a < candidates.size() && b < out.size()) {
              const auto ra = g.rank[candidates[a].first];
              const auto rb = g.rank[out[b].first];
              if (ra < rb) {
                ++a;
              } else if (rb < ra) {
                ++b;
              } else {
                next.emplace_back(candidates[a].first, std::max(candidates[a].second, out[b].second));
                ++a;
                ++b;
              }
            }
            if (!next.empty()) grow(next_value, next_bound, next);
          }
          stack.pop_back();
        }
      };

  for (Vertex u = 0; u < g.out.size(); ++u) {
    if (g.out[u].empty()) continue;
    stack.assign(1, u);
    grow(0.0, limit_of(u), g.out[u]);
  }
}

inline std::vector<std::size_t> identity_rank(std::size_t n) {
  std::vector<std::size_t> r(n);
  std::iota(r.begin(), r.end(), 0);
  return r;
}

/// Rank vertices by increasing bound (ties by index), so each clique is grown
/// from the vertex with the smallest bound.
inline std::vector<std::size_t> rank_by_limit(std::span<const double> limit) {
  std::vector<std::size_t> order(limit.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return limit[a] < limit[b]; });
  std::vector<std::size_t> rank(limit.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  return rank;
}

}  // namespace detail

struct CliqueOptions {
  /// Truncation: cliques whose value exceeds this are dropped.
  double alpha_max = kInfinity;
  /// Optional per-vertex admission bound (see detail::ExpansionLimits).
  std::span<const double> vertex_limit;
};

/// Clique (flag) filtration of a weighted graph: vertices at 0, each clique of
/// at most k+1 vertices at the largest birth among its edges.
inline SparseFiltration clique_expand(std::span<const WeightedEdge> edges, std::size_t n, int k,
                                      const CliqueOptions& opts = {}) {
  if (k < 1) throw InvalidArgument("dimension cap k must be at least 1");
  if (!opts.vertex_limit.empty() && opts.vertex_limit.size() != n)
    throw InvalidArgument("vertex limit size does not match vertex count");
  for (const auto& e : edges)
    if (e.p >= n || e.q >= n) throw InvalidArgument("edge endpoint out of range");

  SparseFiltration f;
  f.k = k;
  f.simplices.reserve(n + edges.size());
  for (Vertex v = 0; v < n; ++v) f.simplices.push_back({{v}, 0.0});

  auto rank = opts.vertex_limit.empty() ? detail::identity_rank(n) : detail::rank_by_limit(opts.vertex_limit);
  const auto graph = detail::orient(edges, n, std::move(rank));
  detail::ExpansionLimits limits{k, opts.alpha_max, opts.vertex_limit};
  detail::expand_cliques(graph, limits, [&](std::span<const Vertex> verts, double value) {
    FilteredSimplex s{{verts.begin(), verts.end()}, value};
    std::sort(s.vertices.begin(), s.vertices.end());
    f.simplices.push_back(std::move(s));
  });
  f.sort();
  if (std::isfinite(opts.alpha_max)) f.alpha_max = opts.alpha_max;
  return f;
}

/// Edges of the sparse filtration: every pair whose relaxed edge birth is at
/// most the smaller of the two deletion times.
inline std::vector<WeightedEdge> sparse_edges(const MetricInput& m, const WeightContext& ctx) {
  std::vector<WeightedEdge> edges;
  const auto& t = ctx.schedule().t;
  const double eps = ctx.epsilon();
  for (std::size_t p = 0; p < m.size(); ++p)
    for (std::size_t q = p + 1; q < m.size(); ++q) {
      const double cap = std::min(t[p], t[q]);
      if (auto birth = solve_edge_birth(eps, m(p, q), t[p], t[q], cap))
        edges.push_back({static_cast<Vertex>(p), static_cast<Vertex>(q), *birth});
    }
  return edges;
}

/// |E(p)|: neighbours q of p in the sparse edge graph with t_p <= t_q.
inline std::vector<std::size_t> forward_degrees(std::span<const WeightedEdge> edges, const DeletionSchedule& s) {
  std::vector<std::size_t> deg(s.size(), 0);
  for (const auto& e : edges) {
    if (s.t[e.p] <= s.t[e.q]) ++deg[e.p];
    if (s.t[e.q] <= s.t[e.p]) ++deg[e.q];
  }
  return deg;
}

/// Everything produced on the way to the sparse filtration.
struct SparseBuild {
  GreedyPermutation permutation;
  DeletionSchedule schedule;
  std::vector<WeightedEdge> edges;
  SparseFiltration filtration;

  std::size_t max_forward_degree() const {
    const auto deg = forward_degrees(edges, schedule);
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  }
};

/// Sparse filtration from an explicit schedule.
inline SparseFiltration build_sparse_from_schedule(const MetricInput& m, const DeletionSchedule& schedule, int k,
                                                   std::vector<WeightedEdge>* edges_out = nullptr) {
  const WeightContext ctx(m, schedule);
  auto edges = sparse_edges(m, ctx);
  CliqueOptions opts;
  opts.vertex_limit = schedule.t;
  auto f = clique_expand(edges, m.size(), k, opts);
  f.kind = FiltrationKind::sparse_S;
  if (edges_out) *edges_out = std::move(edges);
  return f;
}

inline void check_distinct(const GreedyPermutation& gp) {
  for (std::size_t pos = 1; pos < gp.size(); ++pos)
    if (gp.insertion_radius[pos] <= 0.0)
      throw InvalidArgument("point " + std::to_string(gp.order[pos]) +
                            " duplicates an earlier point; deduplicate the input first");
}

/// greedy permutation -> deletion times -> sparse edges -> clique expansion.
inline SparseBuild build_sparse_detailed(const MetricInput& m, double epsilon, int k, std::size_t seed = 0) {
  check_epsilon(epsilon);
  if (k < 1) throw InvalidArgument("dimension cap k must be at least 1");
  SparseBuild b;
  b.permutation = greedy_permutation(m, seed);
  check_distinct(b.permutation);
  b.schedule = deletion_times(b.permutation, epsilon);
  b.filtration = build_sparse_from_schedule(m, b.schedule, k, &b.edges);
  return b;
}

inline SparseFiltration build_sparse(const MetricInput& m, double epsilon, int k, std::size_t seed = 0) {
  return build_sparse_detailed(m, epsilon, k, seed).filtration;
}

/// Vietoris-Rips filtration by diameter, truncated at alpha_max.
inline SparseFiltration full_rips(const MetricInput& m, double alpha_max, int k) {
  if (!(alpha_max > 0.0)) throw InvalidArgument("alpha_max must be positive");
  std::vector<WeightedEdge> edges;
  for (std::size_t p = 0; p < m.size(); ++p)
    for (std::size_t q = p + 1; q < m.size(); ++q) {
      const double d = m(p, q);
      if (d <= alpha_max) edges.push_back({static_cast<Vertex>(p), static_cast<Vertex>(q), d});
    }
  CliqueOptions opts;
  opts.alpha_max = alpha_max;
  auto f = clique_expand(edges, m.size(), k, opts);
  f.kind = FiltrationKind::full_rips;
  return f;
}

/// Relaxed Rips filtration on all points: edge value is the relaxed edge
/// birth, no deletion filter.
inline SparseFiltration relaxed_rips(const MetricInput& m, const WeightContext& ctx, double alpha_max, int k) {
  if (!(alpha_max > 0.0)) throw InvalidArgument("alpha_max must be positive");
  std::vector<WeightedEdge> edges;
  for (std::size_t p = 0; p < m.size(); ++p)
    for (std::size_t q = p + 1; q < m.size(); ++q)
      if (auto birth = edge_birth(ctx, p, q, alpha_max))
        edges.push_back({static_cast<Vertex>(p), static_cast<Vertex>(q), *birth});
  CliqueOptions opts;
  opts.alpha_max = alpha_max;
  auto f = clique_expand(edges, m.size(), k, opts);
  f.kind = FiltrationKind::relaxed_rips;
  return f;
}

enum class StaticKind { Q_open, Q_closed, relaxed_full };

/// A single complex (no filtration values), closed under faces.
struct StaticComplex {
  std::vector<std::vector<Vertex>> simplices;
  double scale = 0.0;
  StaticKind kind = StaticKind::relaxed_full;
  int k = 1;

  std::size_t vertex_count() const {
    return static_cast<std::size_t>(
        std::count_if(simplices.begin(), simplices.end(), [](const auto& s) { return s.size() == 1; }));
  }
};

/// Relaxed Rips complex at scale alpha restricted to the open net, the closed
/// net, or all points.
inline StaticComplex static_complex(const MetricInput& m, const WeightContext& ctx, double alpha, StaticKind kind,
                                    int k) {
  if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be nonnegative");
  if (k < 0) throw InvalidArgument("dimension cap must be nonnegative");
  std::vector<std::size_t> verts;
  switch (kind) {
    case StaticKind::Q_open: verts = net_at(ctx.schedule(), alpha, false); break;
    case StaticKind::Q_closed: verts = net_at(ctx.schedule(), alpha, true); break;
    case StaticKind::relaxed_full:
      verts.resize(m.size());
      std::iota(verts.begin(), verts.end(), 0);
      break;
  }
  std::sort(verts.begin(), verts.end());

  StaticComplex c;
  c.scale = alpha;
  c.kind = kind;
  c.k = k;
  for (std::size_t v : verts) c.simplices.push_back({static_cast<Vertex>(v)});
  if (k >= 1) {
    std::vector<WeightedEdge> edges;
    for (std::size_t a = 0; a < verts.size(); ++a)
      for (std::size_t b = a + 1; b < verts.size(); ++b)
        if (relaxed_edge_present(ctx, verts[a], verts[b], alpha))
          edges.push_back({static_cast<Vertex>(verts[a]), static_cast<Vertex>(verts[b]), 0.0});
    const auto graph = detail::orient(edges, m.size(), detail::identity_rank(m.size()));
    detail::expand_cliques(graph, {k, kInfinity, {}}, [&](std::span<const Vertex> s, double) {
      c.simplices.emplace_back(s.begin(), s.end());
    });
  }
  std::sort(c.simplices.begin(), c.simplices.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return c;
}

/// Text format: one simplex per line, `value v0 v1 ... vd`, preceded by a
/// `# k=<k> kind=<kind> [alpha_max=<a>]` comment line.
inline void write_filtration(std::ostream& os, const SparseFiltration& f) {
  os << "# k=" << f.k << " kind=" << to_string(f.kind);
  if (f.alpha_max) {
    os << " alpha_max=";
    detail::write_real(os, *f.alpha_max);
  }
  os << '\n';
  for (const auto& s : f.simplices) {
    detail::write_real(os, s.value);
    for (Vertex v : s.vertices) os << ' ' << v;
    os << '\n';
  }
}

/// Reads the text format. Without a `k=` comment, k is the largest simplex
/// dimension present (at least 1). Order and faces are not validated here.
inline SparseFiltration read_filtration(std::istream& in) {
  SparseFiltration f;
  std::optional<int> k;
  std::string line;
  std::size_t lineno = 0;
  int max_dim = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      std::istringstream words{std::string(body.substr(1))};
      std::string word;
      while (words >> word) {
        if (word.rfind("k=", 0) == 0) {
          k = std::stoi(word.substr(2));
        } else if (word.rfind("kind=", 0) == 0) {
          f.kind = parse_filtration_kind(word.substr(5));
        } else if (word.rfind("alpha_max=", 0) == 0) {
          f.alpha_max = detail::parse_field(word.substr(10), lineno, 0);
        }
      }
      continue;
    }
    std::istringstream fields{std::string(body)};
    std::string tok;
    if (!(fields >> tok)) continue;
    FilteredSimplex s;
    s.value = detail::parse_field(tok, lineno, 1);
    std::size_t column = 2;
    while (fields >> tok) {
      const double v = detail::parse_field(tok, lineno, column);
      if (v < 0.0 || v != std::floor(v) || v > 4294967295.0)
        throw ParseError("invalid vertex id '" + tok + "'", lineno, column);
      s.vertices.push_back(static_cast<Vertex>(v));
      ++column;
    }
    if (s.vertices.empty()) throw ParseError("simplex line without vertices", lineno);
    max_dim = std::max(max_dim, s.dimension());
    f.simplices.push_back(std::move(s));
  }
  f.k = k.value_or(std::max(1, max_dim));
  return f;
}

}  // namespace sparse_rips

#endif  // SPARSE_RIPS_FILTRATION_HPP
