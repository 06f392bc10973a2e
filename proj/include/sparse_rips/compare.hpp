#ifndef SPARSE_RIPS_COMPARE_HPP
#define SPARSE_RIPS_COMPARE_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sparse_rips/error.hpp"
#include "sparse_rips/persistence.hpp"

namespace sparse_rips {

namespace detail {

/// Maximum bipartite matching by augmenting paths (Kuhn).
/// Returns, for each left node, its matched right node or npos.
class BipartiteMatcher {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  BipartiteMatcher(std::size_t left, std::size_t right) : adj_(left), match_left_(left, npos), match_right_(right, npos) {}

  void connect(std::size_t l, std::size_t r) { adj_[l].push_back(r); }

  std::size_t solve() {
    std::size_t size = 0;
    for (std::size_t l = 0; l < adj_.size(); ++l) {
      visited_.assign(match_right_.size(), false);
      if (augment(l)) ++size;
    }
    return size;
  }

  const std::vector<std::size_t>& left_partner() const noexcept { return match_left_; }
  const std::vector<std::size_t>& right_partner() const noexcept { return match_right_; }

 private:
  bool augment(std::size_t l) {
    for (std::size_t r : adj_[l]) {
      if (visited_[r]) continue;
      visited_[r] = true;
      if (match_right_[r] == npos || augment(match_right_[r])) {
        match_left_[l] = r;
        match_right_[r] = l;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> match_left_;
  std::vector<std::size_t> match_right_;
  std::vector<bool> visited_;
};

}  // namespace detail

inline void check_same_cap(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  if (a.k != b.k)
    throw InvalidArgument("dimension cap mismatch: " + std::to_string(a.k) + " vs " + std::to_string(b.k));
}

/// Per-dimension perfect matching with |birth| and |death| differences within
/// tol; infinite deaths only match infinite deaths.
inline bool diagram_equal(const PersistenceDiagram& a, const PersistenceDiagram& b, double tol = 1e-9) {
  check_same_cap(a, b);
  auto close = [tol](double x, double y) {
    if (std::isinf(x) || std::isinf(y)) return x == y;
    return std::abs(x - y) <= tol;
  };
  for (int d = 0; d < a.k; ++d) {
    const auto& pa = a.dimension(d);
    const auto& pb = b.dimension(d);
    if (pa.size() != pb.size()) return false;
    detail::BipartiteMatcher m(pa.size(), pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i)
      for (std::size_t j = 0; j < pb.size(); ++j)
        if (close(pa[i].birth, pb[j].birth) && close(pa[i].death, pb[j].death)) m.connect(i, j);
    if (m.solve() != pa.size()) return false;
  }
  return true;
}

/// One matched item: a point of A with a point of B, or either with the diagonal.
struct MatchEntry {
  int dim = 0;
  std::optional<std::size_t> a;
  std::optional<std::size_t> b;
};

struct MatchWitness {
  int dim = 0;
  /// 'A' or 'B'
  char side = 'A';
  std::size_t index = 0;
  PersistencePair point;
};

struct MatchResult {
  bool ok = false;
  double factor = 1.0;
  std::vector<MatchEntry> matching;
  std::optional<MatchWitness> witness;
};

/// Slack on the log scale for floating-point round-off in ratio tests.
inline constexpr double kLogSlack = 1e-12;

namespace detail {

/// Multiplicative closeness of two nonnegative values, infinity allowed.
/// Zero only matches zero.
inline bool within_factor(double x, double y, double log_c) {
  if (std::isinf(x) || std::isinf(y)) return x == y;
  if (x == 0.0 || y == 0.0) return x == y;
  return std::abs(std::log(x) - std::log(y)) <= log_c + kLogSlack;
}

struct MatchPoint {
  PersistencePair pair;
  /// True death unknown beyond this censoring scale (truncated oracle).
  std::optional<double> censored_at;
};

inline std::vector<MatchPoint> prepare(const std::vector<PersistencePair>& pairs, std::optional<double> alpha_max) {
  std::vector<MatchPoint> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    MatchPoint mp{p, std::nullopt};
    if (alpha_max && p.death >= *alpha_max) mp.censored_at = *alpha_max;
    out.push_back(mp);
  }
  return out;
}

inline bool deaths_compatible(const MatchPoint& x, const MatchPoint& y, double c, double log_c) {
  if (x.censored_at && y.censored_at) return true;
  if (x.censored_at) return y.pair.death >= (*x.censored_at / c) * std::exp(-kLogSlack);
  if (y.censored_at) return deaths_compatible(y, x, c, log_c);
  return within_factor(x.pair.death, y.pair.death, log_c);
}

inline bool diagonal_ok(const MatchPoint& x, double log_c) {
  const double birth = x.pair.birth;
  const double death = x.censored_at ? *x.censored_at : x.pair.death;
  if (birth == 0.0 || std::isinf(death)) return false;
  return std::log(death) - std::log(birth) <= 2.0 * log_c + kLogSlack;
}

}  // namespace detail

/// Decides whether there is a bijection between the diagrams (diagonal
/// included) under which births and deaths differ by at most a factor c.
///
/// Points born at 0 form an exact bucket and never reach the diagonal; a point
/// may be matched to the diagonal when death / birth <= c^2. On a truncated
/// diagram a death at or beyond alpha_max is censored and matches any death of
/// at least alpha_max / c.
inline MatchResult multiplicative_match(const PersistenceDiagram& a, const PersistenceDiagram& b, double c) {
  check_same_cap(a, b);
  if (!(c >= 1.0)) throw InvalidArgument("approximation factor must be at least 1");
  const double log_c = std::log(c);

  MatchResult result;
  result.factor = c;
  result.ok = true;
  for (int d = 0; d < a.k; ++d) {
    const auto pa = detail::prepare(a.dimension(d), a.alpha_max);
    const auto pb = detail::prepare(b.dimension(d), b.alpha_max);
    const std::size_t na = pa.size();
    const std::size_t nb = pb.size();
    // left: A points, then diagonal copies of B; right: B points, then diagonal copies of A
    detail::BipartiteMatcher m(na + nb, nb + na);
    for (std::size_t i = 0; i < na; ++i) {
      for (std::size_t j = 0; j < nb; ++j)
        if (detail::within_factor(pa[i].pair.birth, pb[j].pair.birth, log_c) &&
            detail::deaths_compatible(pa[i], pb[j], c, log_c))
          m.connect(i, j);
      if (detail::diagonal_ok(pa[i], log_c)) m.connect(i, nb + i);
    }
    // diagonal-to-diagonal edges first so augmenting paths prefer point-to-point pairs
    for (std::size_t j = 0; j < nb; ++j) {
      for (std::size_t i = 0; i < na; ++i) m.connect(na + j, nb + i);
      if (detail::diagonal_ok(pb[j], log_c)) m.connect(na + j, j);
    }
    const std::size_t size = m.solve();
    if (size != na + nb) {
      result.ok = false;
      const auto& left = m.left_partner();
      const auto& right = m.right_partner();
      for (std::size_t i = 0; i < na && !result.witness; ++i)
        if (left[i] == detail::BipartiteMatcher::npos) result.witness = MatchWitness{d, 'A', i, pa[i].pair};
      for (std::size_t j = 0; j < nb && !result.witness; ++j)
        if (right[j] == detail::BipartiteMatcher::npos) result.witness = MatchWitness{d, 'B', j, pb[j].pair};
      result.matching.clear();
      return result;
    }
    const auto& left = m.left_partner();
    for (std::size_t i = 0; i < na; ++i) {
      const std::size_t r = left[i];
      if (r < nb)
        result.matching.push_back({d, i, r});
      else
        result.matching.push_back({d, i, std::nullopt});
    }
    for (std::size_t j = 0; j < nb; ++j)
      if (left[na + j] == j) result.matching.push_back({d, std::nullopt, j});
  }
  return result;
}

}  // namespace sparse_rips

#endif  // SPARSE_RIPS_COMPARE_HPP
