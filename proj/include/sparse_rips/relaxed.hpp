#ifndef SPARSE_RIPS_RELAXED_HPP
#define SPARSE_RIPS_RELAXED_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>

#include "sparse_rips/greedy.hpp"
#include "sparse_rips/metric.hpp"

namespace sparse_rips {

/// Weight of a point with deletion time `t` at scale `alpha`:
///   0                              alpha <= (1-2eps) t
///   (alpha - (1-2eps) t) / 2       (1-2eps) t < alpha < t
///   eps alpha                      alpha >= t
/// An infinite deletion time keeps the weight at 0 for every finite alpha.
inline double point_weight(double epsilon, double t, double alpha) noexcept {
  if (std::isinf(t)) return 0.0;
  const double start = (1.0 - 2.0 * epsilon) * t;
  if (alpha <= start) return 0.0;
  if (alpha < t) return 0.5 * (alpha - start);
  return epsilon * alpha;
}

/// Slope of `point_weight` just to the right of `alpha`.
inline double point_weight_slope(double epsilon, double t, double alpha) noexcept {
  if (std::isinf(t)) return 0.0;
  const double start = (1.0 - 2.0 * epsilon) * t;
  if (alpha < start) return 0.0;
  if (alpha < t) return 0.5;
  return epsilon;
}

/// Smallest alpha >= 0 with d + w_p(alpha) + w_q(alpha) <= alpha, or nothing
/// when that alpha would exceed `cap`.
///
/// g(alpha) = alpha - w_p(alpha) - w_q(alpha) is continuous, piecewise linear
/// and non-decreasing with breakpoints among (1-2eps)t_p, t_p, (1-2eps)t_q, t_q,
/// so the answer is found by walking the pieces and solving the first one
/// on which g reaches d. A flat piece already at d yields its left end.
inline std::optional<double> solve_edge_birth(double epsilon, double d, double tp, double tq,
                                              double cap = kInfinity) {
  auto g = [&](double a) { return a - point_weight(epsilon, tp, a) - point_weight(epsilon, tq, a); };

  std::array<double, 4> cuts{(1.0 - 2.0 * epsilon) * tp, tp, (1.0 - 2.0 * epsilon) * tq, tq};
  std::sort(cuts.begin(), cuts.end());

  double left = 0.0;
  double g_left = 0.0;
  if (d <= 0.0) return cap >= 0.0 ? std::optional<double>(0.0) : std::nullopt;
  for (std::size_t i = 0; i <= cuts.size(); ++i) {
    const double right = i < cuts.size() ? cuts[i] : kInfinity;
    if (right <= left) continue;
    if (left > cap) return std::nullopt;
    const double slope = 1.0 - point_weight_slope(epsilon, tp, left) - point_weight_slope(epsilon, tq, left);
    const double g_right = std::isinf(right) ? kInfinity : g(right);
    if (g_right >= d) {
      double alpha = left;
      if (g_left < d) alpha = std::min(left + (d - g_left) / slope, right);
      if (alpha > cap) return std::nullopt;
      return alpha;
    }
    left = right;
    g_left = g_right;
  }
  return std::nullopt;
}

/// Shared state for weight and relaxed-distance evaluations: the metric and
/// its deletion schedule. Holds a non-owning pointer to the metric, which must
/// outlive the context.
class WeightContext {
 public:
  WeightContext(const MetricInput& metric, DeletionSchedule schedule)
      : metric_(&metric), schedule_(std::move(schedule)) {
    check_epsilon(schedule_.epsilon);
    if (schedule_.size() != metric.size())
      throw InvalidArgument("deletion schedule size does not match the metric");
  }

  const MetricInput& metric() const noexcept { return *metric_; }
  const DeletionSchedule& schedule() const noexcept { return schedule_; }
  double epsilon() const noexcept { return schedule_.epsilon; }
  double deletion_time(std::size_t p) const { return schedule_.t.at(p); }
  std::size_t size() const noexcept { return schedule_.size(); }

 private:
  const MetricInput* metric_;
  DeletionSchedule schedule_;
};

inline double weight(const WeightContext& ctx, std::size_t p, double alpha) {
  return point_weight(ctx.epsilon(), ctx.deletion_time(p), alpha);
}

/// d(p,q) + w_p(alpha) + w_q(alpha).
inline double relaxed_distance(const WeightContext& ctx, std::size_t p, std::size_t q, double alpha) {
  return ctx.metric().distance(p, q) + weight(ctx, p, alpha) + weight(ctx, q, alpha);
}

/// Whether relaxed_distance(p, q, alpha) <= alpha, decided as d <= alpha - w_p - w_q
/// with the right-hand side clamped to [(1-2 eps) alpha, alpha]. Both bounds hold
/// in exact arithmetic since 0 <= w <= eps alpha; clamping keeps round-off from
/// breaking the interleaving with the plain Rips filtration at its breakpoints.
inline bool relaxed_edge_present(const WeightContext& ctx, std::size_t p, std::size_t q, double alpha) {
  const double eps = ctx.epsilon();
  const double slack = alpha - weight(ctx, p, alpha) - weight(ctx, q, alpha);
  return ctx.metric().distance(p, q) <= std::clamp(slack, (1 - 2 * eps) * alpha, alpha);
}

/// Earliest scale at which the relaxed edge condition holds (and keeps holding).
inline std::optional<double> edge_birth(const WeightContext& ctx, std::size_t p, std::size_t q,
                                        double cap = kInfinity) {
  return solve_edge_birth(ctx.epsilon(), ctx.metric().distance(p, q), ctx.deletion_time(p), ctx.deletion_time(q),
                          cap);
}

}  // namespace sparse_rips

#endif  // SPARSE_RIPS_RELAXED_HPP
