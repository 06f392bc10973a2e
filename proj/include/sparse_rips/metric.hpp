#ifndef SPARSE_RIPS_METRIC_HPP
#define SPARSE_RIPS_METRIC_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sparse_rips/error.hpp"

namespace sparse_rips {

/// Absolute tolerance used for all distance comparisons unless stated otherwise.
inline constexpr double kDistanceTolerance = 1e-9;

enum class MetricKind { euclidean, manhattan, chebyshev, explicit_matrix };

inline std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::manhattan: return "manhattan";
    case MetricKind::chebyshev: return "chebyshev";
    case MetricKind::explicit_matrix: return "explicit_matrix";
  }
  return "unknown";
}

inline MetricKind parse_metric_kind(std::string_view name) {
  if (name == "euclidean") return MetricKind::euclidean;
  if (name == "manhattan") return MetricKind::manhattan;
  if (name == "chebyshev") return MetricKind::chebyshev;
  if (name == "explicit_matrix" || name == "matrix") return MetricKind::explicit_matrix;
  throw InvalidArgument("unknown metric kind '" + std::string(name) + "'");
}

/// A finite metric space: either coordinates with a kernel, or an explicit
/// distance matrix. Immutable once built.
class MetricInput {
 public:
  /// Builds a point-cloud metric. All rows must share one dimension.
  static MetricInput from_points(const std::vector<std::vector<double>>& points,
                                 MetricKind kind = MetricKind::euclidean) {
    if (kind == MetricKind::explicit_matrix)
      throw InvalidArgument("point input needs a coordinate kernel, not explicit_matrix");
    if (points.empty()) throw ParseError("empty input: at least one point is required");
    MetricInput m;
    m.kind_ = kind;
    m.n_ = points.size();
    m.dim_ = points.front().size();
    if (m.dim_ == 0) throw ParseError("point with zero coordinates", 1);
    m.coords_.reserve(m.n_ * m.dim_);
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].size() != m.dim_)
        throw ParseError("inconsistent row width (expected " + std::to_string(m.dim_) + ", got " +
                             std::to_string(points[i].size()) + ")",
                         i + 1);
      for (std::size_t c = 0; c < m.dim_; ++c) {
        if (!std::isfinite(points[i][c])) throw ParseError("non-finite coordinate", i + 1, c + 1);
        m.coords_.push_back(points[i][c]);
      }
    }
    return m;
  }

  /// Builds an explicit-matrix metric. Entries (i,j) and (j,i) differing by at
  /// most the tolerance are averaged; anything worse is rejected.
  static MetricInput from_matrix(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ParseError("empty input: at least one row is required");
    const std::size_t n = rows.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n)
        throw ParseError("non-square matrix (" + std::to_string(n) + " rows, row has " +
                             std::to_string(rows[i].size()) + " entries)",
                         i + 1);
    }
    MetricInput m;
    m.kind_ = MetricKind::explicit_matrix;
    m.n_ = n;
    m.matrix_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double v = rows[i][j];
        if (!std::isfinite(v)) throw ParseError("non-finite matrix entry", i + 1, j + 1);
        if (v < 0.0) throw ParseError("negative matrix entry", i + 1, j + 1);
      }
      if (rows[i][i] > kDistanceTolerance)
        throw ParseError("nonzero diagonal entry " + format_number(rows[i][i]), i + 1, i + 1);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double a = rows[i][j];
        const double b = rows[j][i];
        const double gap = std::abs(a - b);
        if (gap > kDistanceTolerance)
          throw ParseError("asymmetry " + format_number(gap) + " > 1e-9", i + 1, j + 1);
        const double avg = a == b ? a : 0.5 * (a + b);
        m.matrix_[i * n + j] = avg;
        m.matrix_[j * n + i] = avg;
      }
    }
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  /// Coordinate dimension; 0 for explicit matrices.
  std::size_t dimension() const noexcept { return dim_; }
  MetricKind kind() const noexcept { return kind_; }
  bool has_points() const noexcept { return kind_ != MetricKind::explicit_matrix; }

  std::span<const double> point(std::size_t i) const {
    check_index(i);
    if (!has_points()) throw InvalidArgument("explicit-matrix metric has no coordinates");
    return {coords_.data() + i * dim_, dim_};
  }

  /// Same coordinates under a different kernel.
  MetricInput with_kind(MetricKind kind) const {
    if (!has_points() || kind == MetricKind::explicit_matrix)
      throw InvalidArgument("kernel can only be changed on point-cloud input");
    MetricInput m = *this;
    m.kind_ = kind;
    return m;
  }

  /// Bounds-checked distance.
  double distance(std::size_t i, std::size_t j) const {
    check_index(i);
    check_index(j);
    return (*this)(i, j);
  }

  /// Unchecked distance for hot loops.
  double operator()(std::size_t i, std::size_t j) const noexcept {
    if (i == j) return 0.0;
    if (kind_ == MetricKind::explicit_matrix) return matrix_[i * n_ + j];
    const double* a = coords_.data() + i * dim_;
    const double* b = coords_.data() + j * dim_;
    double acc = 0.0;
    switch (kind_) {
      case MetricKind::euclidean:
        for (std::size_t c = 0; c < dim_; ++c) {
          const double diff = a[c] - b[c];
          acc += diff * diff;
        }
        return std::sqrt(acc);
      case MetricKind::manhattan:
        for (std::size_t c = 0; c < dim_; ++c) acc += std::abs(a[c] - b[c]);
        return acc;
      case MetricKind::chebyshev:
        for (std::size_t c = 0; c < dim_; ++c) acc = std::max(acc, std::abs(a[c] - b[c]));
        return acc;
      case MetricKind::explicit_matrix: break;
    }
    return acc;
  }

  /// Sub-space induced on `indices` (in the given order).
  MetricInput subset(std::span<const std::size_t> indices) const {
    MetricInput m;
    m.kind_ = kind_;
    m.n_ = indices.size();
    m.dim_ = dim_;
    for (std::size_t i : indices) check_index(i);
    if (has_points()) {
      m.coords_.reserve(m.n_ * dim_);
      for (std::size_t i : indices)
        m.coords_.insert(m.coords_.end(), coords_.begin() + i * dim_, coords_.begin() + (i + 1) * dim_);
    } else {
      m.matrix_.resize(m.n_ * m.n_);
      for (std::size_t a = 0; a < m.n_; ++a)
        for (std::size_t b = 0; b < m.n_; ++b) m.matrix_[a * m.n_ + b] = matrix_[indices[a] * n_ + indices[b]];
    }
    return m;
  }

  double diameter() const noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) best = std::max(best, (*this)(i, j));
    return best;
  }

 private:
  MetricInput() = default;

  void check_index(std::size_t i) const {
    if (i >= n_)
      throw InvalidArgument("point index " + std::to_string(i) + " out of range [0, " + std::to_string(n_) + ")");
  }

  static std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  }

  MetricKind kind_ = MetricKind::euclidean;
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::vector<double> matrix_;
};

inline double distance(const MetricInput& m, std::size_t i, std::size_t j) { return m.distance(i, j); }

/// Result of collapsing points at distance exactly zero.
struct Deduplicated {
  MetricInput metric;
  /// original index -> index in `metric`
  std::vector<std::size_t> original_to_unique;
  /// index in `metric` -> first original index it came from
  std::vector<std::size_t> unique_to_original;
  std::size_t removed = 0;

  /// Human-readable warning, empty when nothing was removed.
  std::string warning() const {
    if (removed == 0) return {};
    return "removed " + std::to_string(removed) + " duplicate point(s) at distance 0; " +
           std::to_string(unique_to_original.size()) + " distinct points remain";
  }
};

/// Keeps the first occurrence of every point, dropping later points at distance
/// exactly 0 from a kept one.
inline Deduplicated deduplicate(const MetricInput& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> original_to_unique(n);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < n; ++i) {
    std::optional<std::size_t> twin;
    for (std::size_t u = 0; u < kept.size(); ++u) {
      if (m(i, kept[u]) == 0.0) {
        twin = u;
        break;
      }
    }
    if (twin) {
      original_to_unique[i] = *twin;
    } else {
      original_to_unique[i] = kept.size();
      kept.push_back(i);
    }
  }
  const std::size_t removed = n - kept.size();
  MetricInput metric = removed == 0 ? m : m.subset(kept);
  return {std::move(metric), std::move(original_to_unique), std::move(kept), removed};
}

/// A triple (i, j, via) with d(i,j) > d(i,via) + d(via,j) + tol, if any.
struct TriangleViolation {
  std::size_t i, j, via;
  double excess;
};

inline std::optional<TriangleViolation> find_triangle_violation(const MetricInput& m,
                                                                double tol = kDistanceTolerance) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dij = m(i, j);
      for (std::size_t v = 0; v < n; ++v) {
        if (v == i || v == j) continue;
        const double excess = dij - (m(i, v) + m(v, j));
        if (excess > tol) return TriangleViolation{i, j, v, excess};
      }
    }
  return std::nullopt;
}

enum class PointFormat { csv, whitespace };

struct LoadOptions {
  PointFormat format = PointFormat::csv;
  bool header = false;
  MetricKind metric = MetricKind::euclidean;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline double parse_field(std::string_view field, std::size_t row, std::size_t column) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* begin = field.data();
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (field.empty() || ec != std::errc{} || ptr != end)
    throw ParseError("cannot parse '" + std::string(field) + "' as a number", row, column);
  if (!std::isfinite(value)) throw ParseError("non-finite value '" + std::string(field) + "'", row, column);
  return value;
}

inline std::vector<double> split_row(std::string_view line, PointFormat format, std::size_t row) {
  std::vector<double> out;
  if (format == PointFormat::csv) {
    std::size_t column = 1;
    while (true) {
      const auto comma = line.find(',');
      out.push_back(parse_field(line.substr(0, comma), row, column));
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
      ++column;
    }
  } else {
    std::size_t column = 1;
    std::size_t pos = 0;
    while (true) {
      pos = line.find_first_not_of(" \t\r", pos);
      if (pos == std::string_view::npos) break;
      const auto stop = std::min(line.find_first_of(" \t\r", pos), line.size());
      out.push_back(parse_field(line.substr(pos, stop - pos), row, column++));
      pos = stop;
    }
  }
  return out;
}

/// Non-blank rows paired with their 1-based line numbers.
inline std::vector<std::pair<std::size_t, std::vector<double>>> read_rows(std::istream& in, PointFormat format,
                                                                         bool header) {
  std::vector<std::pair<std::size_t, std::vector<double>>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (header && lineno == 1) continue;
    if (trim(line).empty()) continue;
    rows.emplace_back(lineno, split_row(line, format, lineno));
  }
  return rows;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

/// Parses a point cloud without deduplicating.
inline MetricInput parse_points(std::istream& in, const LoadOptions& opts = {}) {
  auto rows = detail::read_rows(in, opts.format, opts.header);
  if (rows.empty()) throw ParseError("empty file: no points");
  const std::size_t width = rows.front().second.size();
  std::vector<std::vector<double>> points;
  points.reserve(rows.size());
  for (auto& [lineno, values] : rows) {
    if (values.size() != width)
      throw ParseError("inconsistent row width (expected " + std::to_string(width) + ", got " +
                           std::to_string(values.size()) + ")",
                       lineno);
    points.push_back(std::move(values));
  }
  return MetricInput::from_points(points, opts.metric);
}

/// Parses a square CSV distance matrix without deduplicating.
inline MetricInput parse_matrix(std::istream& in) {
  auto rows = detail::read_rows(in, PointFormat::csv, false);
  if (rows.empty()) throw ParseError("empty file: no matrix rows");
  const std::size_t n = rows.size();
  std::vector<std::vector<double>> matrix;
  matrix.reserve(n);
  for (auto& [lineno, values] : rows) {
    if (values.size() != n)
      throw ParseError("non-square matrix (" + std::to_string(n) + " rows, row has " +
                           std::to_string(values.size()) + " entries)",
                       lineno);
    matrix.push_back(std::move(values));
  }
  return MetricInput::from_matrix(matrix);
}

/// What the loaders hand back: the deduplicated metric, the index remapping,
/// and any warnings raised along the way.
struct LoadedInput {
  MetricInput metric;
  std::vector<std::size_t> original_to_unique;
  std::vector<std::size_t> unique_to_original;
  std::vector<std::string> warnings;
};

/// Triangle-inequality lint is cubic; above this size it is skipped.
inline constexpr std::size_t kTriangleLintLimit = 400;

inline LoadedInput finish_loading(const MetricInput& raw) {
  auto dedup = deduplicate(raw);
  LoadedInput out{std::move(dedup.metric), std::move(dedup.original_to_unique), std::move(dedup.unique_to_original),
                  {}};
  if (dedup.removed != 0) out.warnings.push_back(dedup.warning());
  if (out.metric.kind() == MetricKind::explicit_matrix) {
    if (out.metric.size() <= kTriangleLintLimit) {
      if (auto v = find_triangle_violation(out.metric)) {
        out.warnings.push_back("distance matrix violates the triangle inequality (d(" + std::to_string(v->i) + "," +
                               std::to_string(v->j) + ") exceeds the path through " + std::to_string(v->via) +
                               "); approximation guarantees assume a true metric");
      }
    } else {
      out.warnings.push_back("triangle inequality not checked for matrices above " +
                             std::to_string(kTriangleLintLimit) + " points");
    }
  }
  return out;
}

inline LoadedInput load_points(const std::string& path, const LoadOptions& opts = {}) {
  auto in = detail::open_input(path);
  return finish_loading(parse_points(in, opts));
}

inline LoadedInput load_matrix(const std::string& path) {
  auto in = detail::open_input(path);
  return finish_loading(parse_matrix(in));
}

}  // namespace sparse_rips

#endif  // SPARSE_RIPS_METRIC_HPP
