#ifndef SPARSE_RIPS_GREEDY_HPP
#define SPARSE_RIPS_GREEDY_HPP

#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sparse_rips/error.hpp"
#include "sparse_rips/metric.hpp"

namespace sparse_rips {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Farthest-point ordering of a metric space.
///
/// Position 0 holds the seed. For every later position i, `insertion_radius[i]`
/// is the distance from `order[i]` to the prefix `order[0..i)`, attained at
/// `predecessor[i]`. Radii are non-increasing, so every prefix
/// `{p : radius(p) > r}` covers the space within r and is r-separated; this is
/// what the deletion times below rely on.
struct GreedyPermutation {
  std::vector<std::size_t> order;
  std::vector<double> insertion_radius;
  /// Nearest earlier point, or `npos` for the seed.
  std::vector<std::size_t> predecessor;
  /// Inverse of `order`.
  std::vector<std::size_t> position;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t size() const noexcept { return order.size(); }
  /// Insertion radius of point p (not of position p).
  double radius_of(std::size_t p) const { return insertion_radius[position.at(p)]; }
};

/// O(n^2) farthest-point traversal. Ties go to the smallest point index.
inline GreedyPermutation greedy_permutation(const MetricInput& m, std::size_t seed = 0) {
  const std::size_t n = m.size();
  if (seed >= n)
    throw InvalidArgument("seed " + std::to_string(seed) + " out of range [0, " + std::to_string(n) + ")");

  GreedyPermutation gp;
  gp.order.reserve(n);
  gp.insertion_radius.reserve(n);
  gp.predecessor.reserve(n);
  gp.position.assign(n, GreedyPermutation::npos);

  // Distance of each point to the current prefix, and which prefix point realises it.
  std::vector<double> to_prefix(n, kInfinity);
  std::vector<std::size_t> nearest(n, GreedyPermutation::npos);
  std::vector<bool> taken(n, false);

  std::size_t next = seed;
  double radius = kInfinity;
  for (std::size_t step = 0; step < n; ++step) {
    gp.position[next] = gp.order.size();
    gp.order.push_back(next);
    gp.insertion_radius.push_back(radius);
    gp.predecessor.push_back(step == 0 ? GreedyPermutation::npos : nearest[next]);
    taken[next] = true;

    const std::size_t added = next;
    std::optional<std::size_t> best;
    for (std::size_t p = 0; p < n; ++p) {
      if (taken[p]) continue;
      const double d = m(p, added);
      if (d < to_prefix[p]) {
        to_prefix[p] = d;
        nearest[p] = added;
      }
      if (!best || to_prefix[p] > to_prefix[*best]) best = p;
    }
    if (!best) break;
    next = *best;
    radius = to_prefix[next];
  }
  return gp;
}

/// Per-point deletion times t_p = radius(p) / (eps (1 - 2 eps)); the seed never leaves.
struct DeletionSchedule {
  double epsilon = 0.0;
  /// Indexed by point.
  std::vector<double> t;
  /// Greedy order the times were derived from (kept for export and net queries).
  std::vector<std::size_t> order;

  std::size_t size() const noexcept { return t.size(); }
  double scale() const noexcept { return epsilon * (1.0 - 2.0 * epsilon); }
};

inline void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0 / 3.0))
    throw InvalidArgument("epsilon must lie in (0, 1/3], got " + std::to_string(epsilon));
}

inline DeletionSchedule deletion_times(const GreedyPermutation& gp, double epsilon) {
  check_epsilon(epsilon);
  DeletionSchedule s;
  s.epsilon = epsilon;
  s.order = gp.order;
  s.t.assign(gp.size(), kInfinity);
  const double scale = s.scale();
  for (std::size_t pos = 1; pos < gp.size(); ++pos) s.t[gp.order[pos]] = gp.insertion_radius[pos] / scale;
  return s;
}

/// Open net {p : t_p > alpha} or closed net {p : t_p >= alpha}, in greedy order.
inline std::vector<std::size_t> net_at(const DeletionSchedule& s, double alpha, bool closed = false) {
  if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be nonnegative");
  std::vector<std::size_t> net;
  for (std::size_t p : s.order) {
    const double t = s.t[p];
    if (closed ? t >= alpha : t > alpha) net.push_back(p);
  }
  return net;
}

/// Outcome of checking the covering and packing conditions of one net.
struct NetReport {
  double alpha = 0.0;
  /// eps (1 - 2 eps) alpha
  double bound = 0.0;
  bool cover_ok = true;
  bool pack_ok = true;
  /// Largest d(p, N_alpha) and the point attaining it.
  double worst_cover = 0.0;
  std::size_t cover_witness = GreedyPermutation::npos;
  /// Smallest pairwise distance inside N_alpha and the pair attaining it.
  double worst_pack = kInfinity;
  std::size_t pack_witness_a = GreedyPermutation::npos;
  std::size_t pack_witness_b = GreedyPermutation::npos;
  std::size_t net_size = 0;

  bool ok() const noexcept { return cover_ok && pack_ok; }
  /// Measured packing constant worst_pack / bound (infinite when undefined).
  double packing_ratio() const noexcept { return bound > 0.0 ? worst_pack / bound : kInfinity; }
};

inline NetReport check_net_conditions(const MetricInput& m, const DeletionSchedule& s, double alpha,
                                      double packing_constant = 1.0) {
  NetReport r;
  r.alpha = alpha;
  r.bound = s.scale() * alpha;
  const auto net = net_at(s, alpha);
  r.net_size = net.size();

  std::vector<bool> in_net(m.size(), false);
  for (std::size_t p : net) in_net[p] = true;
  for (std::size_t p = 0; p < m.size(); ++p) {
    double best = in_net[p] ? 0.0 : kInfinity;
    if (!in_net[p])
      for (std::size_t q : net) best = std::min(best, m(p, q));
    if (best > r.worst_cover || r.cover_witness == GreedyPermutation::npos) {
      r.worst_cover = best;
      r.cover_witness = p;
    }
  }
  r.cover_ok = r.worst_cover <= r.bound;

  for (std::size_t a = 0; a < net.size(); ++a)
    for (std::size_t b = a + 1; b < net.size(); ++b) {
      const double d = m(net[a], net[b]);
      if (d < r.worst_pack) {
        r.worst_pack = d;
        r.pack_witness_a = net[a];
        r.pack_witness_b = net[b];
      }
    }
  r.pack_ok = r.worst_pack >= packing_constant * r.bound;
  return r;
}

/// For every p with t_p <= alpha there must be q with t_q >= alpha / (1 - 2 eps)
/// and d(p, q) <= eps alpha. Returns the first violating point, if any.
inline std::optional<std::size_t> find_strong_cover_violation(const MetricInput& m, const DeletionSchedule& s,
                                                              double alpha) {
  const double eps = s.epsilon;
  const double needed = alpha / (1.0 - 2.0 * eps);
  std::vector<std::size_t> anchors;
  for (std::size_t q = 0; q < s.size(); ++q)
    if (s.t[q] >= needed) anchors.push_back(q);
  for (std::size_t p = 0; p < s.size(); ++p) {
    if (s.t[p] > alpha) continue;
    bool found = false;
    for (std::size_t q : anchors)
      if (m(p, q) <= eps * alpha) {
        found = true;
        break;
      }
    if (!found) return p;
  }
  return std::nullopt;
}

namespace detail {
/// Shortest text that reads back to the same double; "inf" for infinity.
inline void write_real(std::ostream& os, double v) {
  if (std::isinf(v)) {
    os << (v > 0 ? "inf" : "-inf");
    return;
  }
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  os.write(buf, res.ptr - buf);
}
}  // namespace detail

/// CSV with columns index, greedy_position, insertion_radius, deletion_time.
inline void write_schedule_csv(std::ostream& os, const GreedyPermutation& gp, const DeletionSchedule& s) {
  os << "index,greedy_position,insertion_radius,deletion_time\n";
  for (std::size_t p = 0; p < s.size(); ++p) {
    os << p << ',' << gp.position[p] << ',';
    detail::write_real(os, gp.radius_of(p));
    os << ',';
    detail::write_real(os, s.t[p]);
    os << '\n';
  }
}

}  // namespace sparse_rips

#endif  // SPARSE_RIPS_GREEDY_HPP
