#ifndef GINZBURG_JSON_IO_HPP
#define GINZBURG_JSON_IO_HPP

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ginzburg/ar_mesh.hpp"
#include "ginzburg/transfer.hpp"
#include "ginzburg/translation_algebra.hpp"

namespace ginzburg {

/// nlohmann::json keeps object keys sorted, so dump() output is a pure
/// function of the content — the backbone of the determinism guarantee.
using Json = nlohmann::json;

inline Json quiver_json(const Quiver& q) {
  Json vertices = Json::array();
  for (int v = 0; v < q.num_vertices(); ++v) vertices.push_back(q.vertex_id(v));
  Json arrows = Json::array();
  for (const Arrow& a : q.arrows()) {
    arrows.push_back(Json{{"id", a.id},
                          {"src", q.vertex_id(a.src)},
                          {"tgt", q.vertex_id(a.tgt)},
                          {"weight", a.weight},
                          {"degree", a.degree}});
  }
  return Json{{"vertices", vertices}, {"arrows", arrows}};
}

/// Canonical label of a homology basis class, e.g. "(2->1,w1,d0)#0".
inline std::string hclass_label(const Quiver& q, const HClass& x) {
  std::ostringstream os;
  os << '(' << q.vertex_id(x.k.src) << "->" << q.vertex_id(x.k.tgt) << ",w" << x.k.w << ",d"
     << x.k.d << ")#" << x.idx;
  return os.str();
}

/// Bigraded Hilbert series aggregated over blocks: { "blocks": [{w, d, dim}] }.
inline Json hilbert_json(const std::map<BlockKey, int>& dims) {
  std::map<std::pair<int, int>, int> agg;
  for (const auto& [k, v] : dims) agg[{k.w, k.d}] += v;
  Json blocks = Json::array();
  for (const auto& [wd, dim] : agg)
    blocks.push_back(Json{{"w", wd.first}, {"d", wd.second}, {"dim", dim}});
  return Json{{"blocks", blocks}};
}

inline Json hilbert_json(const std::map<std::pair<int, int>, int>& agg) {
  Json blocks = Json::array();
  for (const auto& [wd, dim] : agg)
    blocks.push_back(Json{{"w", wd.first}, {"d", wd.second}, {"dim", dim}});
  return Json{{"blocks", blocks}};
}

/// Per-block dimension listing with vertex names.
inline Json block_dims_json(const Quiver& q, const std::map<BlockKey, int>& dims) {
  Json out = Json::array();
  for (const auto& [k, v] : dims)
    out.push_back(Json{{"src", q.vertex_id(k.src)},
                       {"tgt", q.vertex_id(k.tgt)},
                       {"w", k.w},
                       {"d", k.d},
                       {"dim", v}});
  return out;
}

/// Transferred structure maps: one entry per nonzero mu_n value, rationals as
/// "p/q" strings.
inline Json table_json(const Quiver& q, const AInfinityTable& table) {
  Json entries = Json::array();
  for (const auto& [inputs, value] : table.entries) {
    Json in = Json::array();
    for (const HClass& x : inputs) in.push_back(hclass_label(q, x));
    Json out = Json::array();
    for (const auto& [y, c] : value)
      out.push_back(Json{{"label", hclass_label(q, y)}, {"coeff", rat_to_string(c)}});
    entries.push_back(
        Json{{"n", static_cast<int>(inputs.size())}, {"inputs", in}, {"output", out}});
  }
  return Json{{"max_weight", table.max_weight}, {"n_max", table.nmax}, {"entries", entries}};
}

inline Json compare_json(const Quiver& q, const CompareResult& c) {
  Json mismatches = Json::array();
  for (const BlockKey& k : c.mismatches)
    mismatches.push_back(Json{
        {"src", q.vertex_id(k.src)}, {"tgt", q.vertex_id(k.tgt)}, {"w", k.w}, {"d", k.d}});
  return Json{{"blocks_checked", c.blocks_checked},
              {"mismatches", mismatches},
              {"hilbert_a", hilbert_json(c.hilbert_a)},
              {"hilbert_b", hilbert_json(c.hilbert_b)}};
}

/// The knitted fragment as a list of objects (orbit, slice, dimension vector,
/// shift flag); entries past the shift point carry negative vectors.
inline Json fragment_json(const Quiver& q, int depth) {
  KnitResult kr = knit(q, depth);
  // Each orbit is knitted up to (and including) its first shifted object;
  // everything past the shift repeats the window up to shift.
  std::vector<int> cutoff(static_cast<size_t>(q.num_vertices()), depth);
  for (int i = 0; i < q.num_vertices(); ++i)
    for (int m = 0; m <= depth; ++m) {
      bool shifted = false;
      for (long x : kr.dims[static_cast<size_t>(m)][static_cast<size_t>(i)])
        if (x < 0) shifted = true;
      if (shifted) {
        cutoff[static_cast<size_t>(i)] = m;
        break;
      }
    }
  Json objects = Json::array();
  for (int m = 0; m <= depth; ++m)
    for (int i = 0; i < q.num_vertices(); ++i) {
      if (m > cutoff[static_cast<size_t>(i)]) continue;
      const std::vector<long>& v = kr.dims[static_cast<size_t>(m)][static_cast<size_t>(i)];
      bool zero = true, shifted = false;
      for (long x : v) {
        if (x != 0) zero = false;
        if (x < 0) shifted = true;
      }
      if (zero) continue;
      objects.push_back(Json{{"orbit", q.vertex_id(i)},
                             {"slice", m},
                             {"dim_vector", v},
                             {"shifted", shifted}});
    }
  return Json{{"quiver", quiver_json(q)}, {"depth", depth}, {"objects", objects}};
}

/// DOT rendering of the knitted fragment for external graph viewers.
inline std::string fragment_dot(const Quiver& q, int depth) {
  MeshFragment f = build_fragment(q, depth, false);
  std::ostringstream os;
  os << "digraph ar {\n  rankdir=LR;\n";
  for (int v = 0; v < f.fragment.num_vertices(); ++v)
    os << "  \"" << f.fragment.vertex_id(v) << "\";\n";
  for (const Arrow& a : f.fragment.arrows())
    os << "  \"" << f.fragment.vertex_id(a.src) << "\" -> \"" << f.fragment.vertex_id(a.tgt)
       << "\" [label=\"" << a.id << "\"];\n";
  os << "}\n";
  return os.str();
}

/// Chain-level dump of the truncated dg algebra: bases and differential
/// entries per block.
inline Json dump_json(const DgAlgebra& g, int max_weight) {
  auto cx = truncate_dg(g, max_weight);
  Json blocks = Json::array();
  for (const auto& [key, bc] : cx) {
    Json basis = Json::array();
    for (const auto& degree_basis : bc.basis) {
      Json labels = Json::array();
      for (const Path& p : degree_basis) labels.push_back(path_to_string(g.hat, p));
      basis.push_back(labels);
    }
    Json diffs = Json::array();
    for (size_t k = 1; k < bc.d.size(); ++k) {
      const QMatrix& m = bc.d[k];
      Json entries = Json::array();
      for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
          if (m.at(r, c) != 0)
            entries.push_back(
                Json{{"row", r}, {"col", c}, {"coeff", rat_to_string(m.at(r, c))}});
      diffs.push_back(Json{{"deg", static_cast<int>(k)}, {"entries", entries}});
    }
    blocks.push_back(Json{{"src", g.hat.vertex_id(bc.src)},
                          {"tgt", g.hat.vertex_id(bc.tgt)},
                          {"w", bc.w},
                          {"basis", basis},
                          {"d", diffs}});
  }
  return Json{{"max_weight", max_weight}, {"blocks", blocks}};
}

namespace detail {

inline void render_text_rec(const Json& j, const std::string& indent, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_object() || v.is_array()) {
        os << indent << k << ":\n";
        render_text_rec(v, indent + "  ", os);
      } else {
        os << indent << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_object() || v.is_array()) {
        os << indent << "-\n";
        render_text_rec(v, indent + "  ", os);
      } else {
        os << indent << "- " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
    if (j.empty()) os << indent << "(empty)\n";
  }
}

}  // namespace detail

/// Plain-text rendering derived from the canonical JSON.
inline std::string render_text(const Json& j) {
  std::ostringstream os;
  detail::render_text_rec(j, "", os);
  return os.str();
}

}  // namespace ginzburg

#endif  // GINZBURG_JSON_IO_HPP
