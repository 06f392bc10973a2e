#ifndef SPARSE_RIPS_PERSISTENCE_HPP
#define SPARSE_RIPS_PERSISTENCE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <unordered_map>
#include <vector>

#include "sparse_rips/error.hpp"
#include "sparse_rips/filtration.hpp"

namespace sparse_rips {

struct PersistencePair {
  double birth = 0.0;
  /// +inf for classes that never die.
  double death = kInfinity;

  bool essential() const noexcept { return std::isinf(death); }
  friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

inline bool pair_less(const PersistencePair& a, const PersistencePair& b) {
  if (a.birth != b.birth) return a.birth < b.birth;
  return a.death < b.death;
}

struct PersistenceDiagram {
  /// pairs[d] holds the classes of homological dimension d, for d in 0..k-1.
  std::vector<std::vector<PersistencePair>> pairs;
  int k = 1;
  std::optional<double> alpha_max;

  const std::vector<PersistencePair>& dimension(int d) const { return pairs.at(static_cast<std::size_t>(d)); }

  std::size_t essential_count(int d) const {
    const auto& ps = dimension(d);
    return static_cast<std::size_t>(std::count_if(ps.begin(), ps.end(), [](const auto& p) { return p.essential(); }));
  }

  void sort() {
    for (auto& ps : pairs) std::sort(ps.begin(), ps.end(), pair_less);
  }
};

/// Column-reduction outcome in terms of simplex positions in the filtration.
struct Pairing {
  /// (creator, destroyer) positions.
  std::vector<std::pair<std::size_t, std::size_t>> finite;
  /// Unpaired creators of dimension < k.
  std::vector<std::size_t> essential;
  /// Unpaired creators of dimension k; their classes are not meaningful under a k-skeleton.
  std::vector<std::size_t> top_creators;
};

using Column = std::vector<std::uint32_t>;

/// Z/2 column addition: symmetric difference of two sorted index lists.
inline void add_column(Column& target, const Column& source) {
  Column out;
  out.reserve(target.size() + source.size());
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(), std::back_inserter(out));
  target.swap(out);
}

/// Boundary columns in filtration order; entries are positions of faces.
inline std::vector<Column> boundary_columns(const SparseFiltration& f) {
  if (f.size() > UINT32_MAX) throw FiltrationError("filtration too large");
  std::unordered_map<std::vector<Vertex>, std::uint32_t, VertexListHash> index;
  index.reserve(f.size());
  std::vector<Column> cols(f.size());
  std::vector<Vertex> face;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const auto& verts = f.simplices[j].vertices;
    if (verts.size() > 1) {
      face.resize(verts.size() - 1);
      for (std::size_t skip = 0; skip < verts.size(); ++skip) {
        for (std::size_t i = 0, w = 0; i < verts.size(); ++i)
          if (i != skip) face[w++] = verts[i];
        auto it = index.find(face);
        if (it == index.end()) throw FiltrationError("simplex at position " + std::to_string(j) + " is missing a face");
        cols[j].push_back(it->second);
      }
      std::sort(cols[j].begin(), cols[j].end());
    }
    index.emplace(verts, static_cast<std::uint32_t>(j));
  }
  return cols;
}

/// Standard persistence reduction over Z/2 with clearing: dimensions are
/// processed from k down to 1 and every pivot found in dimension d zeroes the
/// column of that pivot in dimension d-1 without reducing it.
inline Pairing reduce_filtration(const SparseFiltration& f) {
  auto cols = boundary_columns(f);
  const std::size_t n = f.size();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(n, none);  // pivot row -> column that owns it
  std::vector<bool> cleared(n, false);
  std::vector<bool> zero(n, false);

  std::vector<std::vector<std::size_t>> by_dim(static_cast<std::size_t>(f.k) + 1);
  for (std::size_t j = 0; j < n; ++j) {
    const auto d = static_cast<std::size_t>(f.simplices[j].dimension());
    if (d >= by_dim.size()) throw FiltrationError("simplex dimension exceeds the cap");
    by_dim[d].push_back(j);
  }

  Pairing out;
  for (int d = f.k; d >= 1; --d) {
    for (std::size_t j : by_dim[static_cast<std::size_t>(d)]) {
      if (cleared[j]) continue;
      Column& col = cols[j];
      while (!col.empty() && owner[col.back()] != none) add_column(col, cols[owner[col.back()]]);
      if (col.empty()) {
        zero[j] = true;
        continue;
      }
      const std::size_t pivot = col.back();
      owner[pivot] = j;
      cleared[pivot] = true;
      out.finite.emplace_back(pivot, j);
    }
  }
  for (std::size_t j : by_dim[0]) zero[j] = true;

  for (std::size_t j = 0; j < n; ++j) {
    if (!zero[j] || owner[j] != none) continue;
    if (f.simplices[j].dimension() < f.k)
      out.essential.push_back(j);
    else
      out.top_creators.push_back(j);
  }
  std::sort(out.finite.begin(), out.finite.end());
  return out;
}

struct PersistenceOptions {
  /// Keep pairs with birth == death.
  bool keep_zero_persistence = false;
  /// Run validate_filtration first (sortedness, faces, values).
  bool validate = true;
};

inline PersistenceDiagram compute_persistence(const SparseFiltration& f, const PersistenceOptions& opts = {}) {
  if (f.k < 1) throw FiltrationError("dimension cap k must be at least 1");
  if (opts.validate) validate_filtration(f);
  const auto pairing = reduce_filtration(f);

  PersistenceDiagram dgm;
  dgm.k = f.k;
  dgm.alpha_max = f.alpha_max;
  dgm.pairs.resize(static_cast<std::size_t>(f.k));
  for (const auto& [creator, destroyer] : pairing.finite) {
    const auto& c = f.simplices[creator];
    const double birth = c.value;
    const double death = f.simplices[destroyer].value;
    if (birth == death && !opts.keep_zero_persistence) continue;
    dgm.pairs[static_cast<std::size_t>(c.dimension())].push_back({birth, death});
  }
  for (std::size_t j : pairing.essential) {
    const auto& c = f.simplices[j];
    dgm.pairs[static_cast<std::size_t>(c.dimension())].push_back({c.value, kInfinity});
  }
  dgm.sort();
  return dgm;
}

namespace detail {

/// Rank of a Z/2 matrix given as sparse columns (destroys the input).
inline std::size_t column_rank(std::vector<Column> cols) {
  std::unordered_map<std::uint32_t, std::size_t> owner;
  std::size_t rank = 0;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    auto& col = cols[j];
    while (!col.empty()) {
      auto it = owner.find(col.back());
      if (it == owner.end()) break;
      add_column(col, cols[it->second]);
    }
    if (!col.empty()) {
      owner.emplace(col.back(), j);
      ++rank;
    }
  }
  return rank;
}

}  // namespace detail

/// Betti numbers over Z/2 for dimensions 0..k-1 (0..k with include_top; the
/// top entry is only meaningful when the complex has no (k+1)-cliques missing).
inline std::vector<std::size_t> betti_numbers(const StaticComplex& c, bool include_top = false) {
  int top = 0;
  for (const auto& s : c.simplices) top = std::max(top, static_cast<int>(s.size()) - 1);
  const int k = std::max(c.k, top);

  std::vector<std::unordered_map<std::vector<Vertex>, std::uint32_t, VertexListHash>> index(
      static_cast<std::size_t>(k) + 1);
  std::vector<std::vector<const std::vector<Vertex>*>> by_dim(static_cast<std::size_t>(k) + 1);
  for (const auto& s : c.simplices) {
    if (s.empty()) throw FiltrationError("empty simplex in static complex");
    const auto d = s.size() - 1;
    index[d].emplace(s, static_cast<std::uint32_t>(by_dim[d].size()));
    by_dim[d].push_back(&s);
  }

  // rank of the boundary map from dimension d to d-1, for d = 1..k
  std::vector<std::size_t> rank(static_cast<std::size_t>(k) + 2, 0);
  for (int d = 1; d <= k; ++d) {
    std::vector<Column> cols;
    cols.reserve(by_dim[static_cast<std::size_t>(d)].size());
    std::vector<Vertex> face;
    for (const auto* s : by_dim[static_cast<std::size_t>(d)]) {
      Column col;
      face.resize(s->size() - 1);
      for (std::size_t skip = 0; skip < s->size(); ++skip) {
        for (std::size_t i = 0, w = 0; i < s->size(); ++i)
          if (i != skip) face[w++] = (*s)[i];
        auto it = index[static_cast<std::size_t>(d) - 1].find(face);
        if (it == index[static_cast<std::size_t>(d) - 1].end())
          throw FiltrationError("static complex is not closed under faces");
        col.push_back(it->second);
      }
      std::sort(col.begin(), col.end());
      cols.push_back(std::move(col));
    }
    rank[static_cast<std::size_t>(d)] = detail::column_rank(std::move(cols));
  }

  const int last = include_top ? k : c.k - 1;
  std::vector<std::size_t> betti;
  for (int d = 0; d <= last; ++d) {
    const auto ud = static_cast<std::size_t>(d);
    betti.push_back(by_dim[ud].size() - rank[ud] - rank[ud + 1]);
  }
  return betti;
}

/// Constant-value filtration of a static complex (every simplex at `value`).
inline SparseFiltration as_filtration(const StaticComplex& c, double value = 0.0) {
  SparseFiltration f;
  f.k = std::max(1, c.k);
  for (const auto& s : c.simplices) f.simplices.push_back({s, value});
  f.sort();
  return f;
}

}  // namespace sparse_rips

#endif  // SPARSE_RIPS_PERSISTENCE_HPP
