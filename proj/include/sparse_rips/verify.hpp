#ifndef SPARSE_RIPS_VERIFY_HPP
#define SPARSE_RIPS_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "sparse_rips/compare.hpp"
#include "sparse_rips/error.hpp"
#include "sparse_rips/filtration.hpp"
#include "sparse_rips/generators.hpp"
#include "sparse_rips/greedy.hpp"
#include "sparse_rips/persistence.hpp"
#include "sparse_rips/relaxed.hpp"

namespace sparse_rips {

struct VerifyOptions {
  double epsilon = 1.0 / 3.0;
  int k = 2;
  std::size_t samples = 16;
  std::size_t seed = 0;
  std::uint64_t sampling_seed = 1;
  /// The full and relaxed Rips oracles are refused above this size unless forced.
  std::size_t max_points = 64;
  bool force = false;
  /// Multiplies every deletion time; 1 leaves the schedule untouched. Only
  /// useful to demonstrate that the checks catch a broken schedule.
  double schedule_scale = 1.0;
};

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
};

/// Sorted list of every scale at which a relaxed edge appears or a point is deleted.
inline std::vector<double> event_scales(const MetricInput& m, const WeightContext& ctx) {
  std::vector<double> events;
  for (double t : ctx.schedule().t)
    if (std::isfinite(t)) events.push_back(t);
  for (std::size_t p = 0; p < m.size(); ++p)
    for (std::size_t q = p + 1; q < m.size(); ++q)
      if (auto b = edge_birth(ctx, p, q)) events.push_back(*b);
  std::sort(events.begin(), events.end());
  return events;
}

/// Draws `count` scales uniformly in (0, hi] staying at least `gap` (relative)
/// away from every event scale.
inline std::vector<double> sample_generic_scales(const std::vector<double>& events, double hi, std::size_t count,
                                                 Random& rng, double gap = 1e-9) {
  std::vector<double> out;
  std::size_t attempts = 0;
  while (out.size() < count && attempts < 1000 * (count + 1)) {
    ++attempts;
    const double a = rng.uniform(0.0, hi);
    if (a <= 0.0) continue;
    const auto it = std::lower_bound(events.begin(), events.end(), a);
    const double tol = gap * std::max(1.0, a);
    bool near = false;
    if (it != events.end() && std::abs(*it - a) <= tol) near = true;
    if (it != events.begin() && std::abs(*std::prev(it) - a) <= tol) near = true;
    if (!near) out.push_back(a);
  }
  return out;
}

namespace detail {

inline std::string join(const std::vector<std::size_t>& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

}  // namespace detail

/// Runs every executable guarantee on one input: edge interleaving, net
/// conditions, homology of sparse versus relaxed complexes, equality of the
/// sparse and relaxed diagrams, and the c-approximation of the Rips diagram.
inline VerifyReport verify_instance(const MetricInput& m, const VerifyOptions& opts) {
  check_epsilon(opts.epsilon);
  if (opts.k < 1) throw InvalidArgument("dimension cap k must be at least 1");
  if (opts.samples == 0) throw InvalidArgument("samples must be positive");
  if (m.size() > opts.max_points && !opts.force)
    throw InvalidArgument("refusing to run the Rips oracles on " + std::to_string(m.size()) + " points (limit " +
                          std::to_string(opts.max_points) + "); pass --force to override");
  if (!(opts.schedule_scale > 0.0)) throw InvalidArgument("schedule scale must be positive");

  const double eps = opts.epsilon;
  const double c = 1.0 / (1.0 - 2.0 * eps);
  Random rng(opts.sampling_seed);
  VerifyReport report;

  const auto gp = greedy_permutation(m, opts.seed);
  check_distinct(gp);
  auto schedule = deletion_times(gp, eps);
  if (opts.schedule_scale != 1.0)
    for (auto& t : schedule.t) t *= opts.schedule_scale;
  const WeightContext ctx(m, schedule);
  const auto events = event_scales(m, ctx);
  const double top = events.empty() ? 1.0 : events.back() * 1.05;

  {
    CheckResult r{"interleaving", true, ""};
    std::size_t evaluated = 0;
    for (std::size_t s = 0; s < opts.samples && r.passed; ++s) {
      const double alpha = rng.uniform(0.0, top);
      for (std::size_t p = 0; p < m.size() && r.passed; ++p)
        for (std::size_t q = p + 1; q < m.size(); ++q) {
          const double d = m(p, q);
          const bool relaxed = relaxed_edge_present(ctx, p, q, alpha);
          ++evaluated;
          if (d <= (1 - 2 * eps) * alpha && !relaxed) {
            r.passed = false;
            r.detail = "edge " + detail::join({p, q}) + " in R_{alpha/c} but not in the relaxed complex at alpha=" +
                       std::to_string(alpha);
            break;
          }
          if (relaxed && !(d <= alpha)) {
            r.passed = false;
            r.detail = "relaxed edge " + detail::join({p, q}) + " missing from R_alpha at alpha=" + std::to_string(alpha);
            break;
          }
        }
    }
    if (r.passed) r.detail = std::to_string(evaluated) + " pair/scale evaluations";
    report.checks.push_back(r);
  }

  {
    CheckResult r{"net_conditions", true, ""};
    double min_ratio = kInfinity;
    for (std::size_t s = 0; s < opts.samples && r.passed; ++s) {
      const double alpha = rng.uniform(0.0, top);
      const auto net = check_net_conditions(m, schedule, alpha);
      min_ratio = std::min(min_ratio, net.packing_ratio());
      if (!net.cover_ok) {
        r.passed = false;
        r.detail = "covering fails at alpha=" + std::to_string(alpha) + ": point " +
                   std::to_string(net.cover_witness) + " is " + std::to_string(net.worst_cover) +
                   " from the net, bound " + std::to_string(net.bound);
      } else if (!net.pack_ok) {
        r.passed = false;
        r.detail = "packing fails at alpha=" + std::to_string(alpha) + ": points " +
                   detail::join({net.pack_witness_a, net.pack_witness_b}) + " are " + std::to_string(net.worst_pack) +
                   " apart, bound " + std::to_string(net.bound);
      } else if (auto bad = find_strong_cover_violation(m, schedule, alpha)) {
        r.passed = false;
        r.detail = "strengthened covering fails at alpha=" + std::to_string(alpha) + " for point " +
                   std::to_string(*bad);
      }
    }
    if (r.passed) {
      std::ostringstream os;
      os << "measured packing constant >= " << min_ratio;
      r.detail = os.str();
    }
    report.checks.push_back(r);
  }

  {
    CheckResult r{"betti_sparse_vs_relaxed", true, ""};
    const auto scales = sample_generic_scales(events, top, opts.samples, rng);
    for (double alpha : scales) {
      const auto q_open = betti_numbers(static_complex(m, ctx, alpha, StaticKind::Q_open, opts.k));
      const auto q_closed = betti_numbers(static_complex(m, ctx, alpha, StaticKind::Q_closed, opts.k));
      const auto full = betti_numbers(static_complex(m, ctx, alpha, StaticKind::relaxed_full, opts.k));
      if (q_open != full || q_closed != full) {
        r.passed = false;
        r.detail = "at alpha=" + std::to_string(alpha) + " Q has Betti " + detail::join(q_open) +
                   " but the relaxed complex has " + detail::join(full);
        break;
      }
    }
    if (r.passed) r.detail = std::to_string(scales.size()) + " scales";
    report.checks.push_back(r);
  }

  const auto sparse = build_sparse_from_schedule(m, schedule, opts.k);
  const auto dgm_sparse = compute_persistence(sparse);
  {
    CheckResult r{"diagram_equal_sparse_relaxed", true, ""};
    const auto relaxed = relaxed_rips(m, ctx, kInfinity, opts.k);
    const auto dgm_relaxed = compute_persistence(relaxed);
    r.passed = diagram_equal(dgm_sparse, dgm_relaxed, 1e-9);
    r.detail = std::to_string(sparse.size()) + " sparse vs " + std::to_string(relaxed.size()) + " relaxed simplices";
    report.checks.push_back(r);
  }

  {
    CheckResult r{"c_approximation_of_rips", true, ""};
    const auto rips = full_rips(m, kInfinity, opts.k);
    const auto match = multiplicative_match(dgm_sparse, compute_persistence(rips), c);
    r.passed = match.ok;
    std::ostringstream os;
    os << "c=" << c;
    if (match.witness)
      os << "; unmatched point (" << match.witness->point.birth << ", " << match.witness->point.death << ") in H"
         << match.witness->dim << " of " << (match.witness->side == 'A' ? "sparse" : "Rips");
    r.detail = os.str();
    report.checks.push_back(r);
  }

  return report;
}

}  // namespace sparse_rips

#endif  // SPARSE_RIPS_VERIFY_HPP
