#ifndef SPARSE_RIPS_IO_HPP
#define SPARSE_RIPS_IO_HPP

// Diagram and match-report serialization. Requires nlohmann/json.

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"
#include "sparse_rips/compare.hpp"
#include "sparse_rips/error.hpp"
#include "sparse_rips/persistence.hpp"

namespace sparse_rips {

namespace detail {

inline nlohmann::json real_or_inf(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

inline double read_real_or_inf(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInfinity;
    throw ParseError("expected a number or \"inf\", got \"" + j.get<std::string>() + "\"");
  }
  if (!j.is_number()) throw ParseError("expected a number or \"inf\"");
  return j.get<double>();
}

}  // namespace detail

/// {"k": int, "alpha_max": number|null, "diagrams": [{"dim": int, "pairs": [[b, d|"inf"], ...]}]}
inline nlohmann::json diagram_to_json(const PersistenceDiagram& dgm) {
  nlohmann::json j;
  j["k"] = dgm.k;
  j["alpha_max"] = dgm.alpha_max ? nlohmann::json(*dgm.alpha_max) : nlohmann::json(nullptr);
  auto diagrams = nlohmann::json::array();
  for (int d = 0; d < dgm.k; ++d) {
    auto pairs = nlohmann::json::array();
    for (const auto& p : dgm.dimension(d)) pairs.push_back({p.birth, detail::real_or_inf(p.death)});
    diagrams.push_back({{"dim", d}, {"pairs", std::move(pairs)}});
  }
  j["diagrams"] = std::move(diagrams);
  return j;
}

inline PersistenceDiagram diagram_from_json(const nlohmann::json& j) {
  try {
    PersistenceDiagram dgm;
    dgm.k = j.at("k").get<int>();
    if (dgm.k < 1) throw ParseError("diagram k must be at least 1");
    if (j.contains("alpha_max") && !j.at("alpha_max").is_null()) dgm.alpha_max = j.at("alpha_max").get<double>();
    dgm.pairs.resize(static_cast<std::size_t>(dgm.k));
    for (const auto& entry : j.at("diagrams")) {
      const int d = entry.at("dim").get<int>();
      if (d < 0 || d >= dgm.k) throw ParseError("diagram dimension " + std::to_string(d) + " outside 0..k-1");
      for (const auto& p : entry.at("pairs")) {
        if (!p.is_array() || p.size() != 2) throw ParseError("diagram pair must be [birth, death]");
        dgm.pairs[static_cast<std::size_t>(d)].push_back(
            {detail::read_real_or_inf(p[0]), detail::read_real_or_inf(p[1])});
      }
    }
    dgm.sort();
    return dgm;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed diagram JSON: ") + e.what());
  }
}

inline void write_diagram_json(std::ostream& os, const PersistenceDiagram& dgm) {
  os << diagram_to_json(dgm).dump(2) << '\n';
}

inline PersistenceDiagram read_diagram_json(std::istream& is) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed diagram JSON: ") + e.what());
  }
  return diagram_from_json(j);
}

/// dim,birth,death rows with "inf" for essential classes.
inline void write_diagram_csv(std::ostream& os, const PersistenceDiagram& dgm) {
  os << "dim,birth,death\n";
  for (int d = 0; d < dgm.k; ++d)
    for (const auto& p : dgm.dimension(d)) {
      os << d << ',';
      detail::write_real(os, p.birth);
      os << ',';
      detail::write_real(os, p.death);
      os << '\n';
    }
}

inline nlohmann::json match_to_json(const MatchResult& r) {
  nlohmann::json j;
  j["ok"] = r.ok;
  j["factor"] = r.factor;
  auto matching = nlohmann::json::array();
  for (const auto& e : r.matching) {
    matching.push_back({{"dim", e.dim},
                        {"a", e.a ? nlohmann::json(*e.a) : nlohmann::json("diagonal")},
                        {"b", e.b ? nlohmann::json(*e.b) : nlohmann::json("diagonal")}});
  }
  j["matching"] = std::move(matching);
  if (r.witness) {
    j["witness"] = {{"dim", r.witness->dim},
                    {"side", std::string(1, r.witness->side)},
                    {"index", r.witness->index},
                    {"birth", r.witness->point.birth},
                    {"death", detail::real_or_inf(r.witness->point.death)}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

}  // namespace sparse_rips

#endif  // SPARSE_RIPS_IO_HPP
