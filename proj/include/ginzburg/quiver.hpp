#ifndef GINZBURG_QUIVER_HPP
#define GINZBURG_QUIVER_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ginzburg/rational.hpp"

namespace ginzburg {

struct Arrow {
  std::string id;
  int src = 0;  ///< vertex index
  int tgt = 0;  ///< vertex index
  int weight = 0;
  int degree = 0;
};

/// Finite quiver with string ids and optional per-arrow bidegrees.
/// Plain quivers are the special case where every bidegree is (0,0), so a
/// single type houses both Quiver and BigradedQuiver roles. Vertices and
/// arrows are kept sorted by id so every downstream enumeration order is a
/// pure function of the input.
class Quiver {
 public:
  Quiver() = default;

  int add_vertex(const std::string& id) {
    if (vertex_index_.count(id)) throw ValidationError("duplicate vertex id: " + id);
    int idx = static_cast<int>(vertex_ids_.size());
    vertex_ids_.push_back(id);
    vertex_index_[id] = idx;
    return idx;
  }

  int add_arrow(const std::string& id, const std::string& src, const std::string& tgt,
                int weight = 0, int degree = 0) {
    if (arrow_index_.count(id)) throw ValidationError("duplicate arrow id: " + id);
    auto si = vertex_index_.find(src);
    auto ti = vertex_index_.find(tgt);
    if (si == vertex_index_.end()) throw ValidationError("unknown vertex: " + src);
    if (ti == vertex_index_.end()) throw ValidationError("unknown vertex: " + tgt);
    if (weight < 0) throw ValidationError("arrow weight must be nonnegative: " + id);
    int idx = static_cast<int>(arrows_.size());
    arrows_.push_back(Arrow{id, si->second, ti->second, weight, degree});
    arrow_index_[id] = idx;
    return idx;
  }

  int num_vertices() const { return static_cast<int>(vertex_ids_.size()); }
  int num_arrows() const { return static_cast<int>(arrows_.size()); }
  const std::string& vertex_id(int i) const { return vertex_ids_[i]; }
  const Arrow& arrow(int i) const { return arrows_[i]; }
  const std::vector<Arrow>& arrows() const { return arrows_; }

  int vertex(const std::string& id) const {
    auto it = vertex_index_.find(id);
    if (it == vertex_index_.end()) throw ValidationError("unknown vertex: " + id);
    return it->second;
  }
  std::optional<int> find_vertex(const std::string& id) const {
    auto it = vertex_index_.find(id);
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
  }
  int arrow_index(const std::string& id) const {
    auto it = arrow_index_.find(id);
    if (it == arrow_index_.end()) throw ValidationError("unknown arrow: " + id);
    return it->second;
  }

  /// Re-orders vertices and arrows by id so that index order equals id order.
  /// Called once after construction; parse_quiver and all in-library builders
  /// do this before the quiver escapes.
  void canonicalize() {
    std::vector<int> vperm(vertex_ids_.size());
    for (size_t i = 0; i < vperm.size(); ++i) vperm[i] = static_cast<int>(i);
    std::sort(vperm.begin(), vperm.end(),
              [&](int a, int b) { return vertex_ids_[a] < vertex_ids_[b]; });
    std::vector<int> vnew(vperm.size());
    std::vector<std::string> vids(vperm.size());
    for (size_t i = 0; i < vperm.size(); ++i) {
      vnew[vperm[i]] = static_cast<int>(i);
      vids[i] = vertex_ids_[vperm[i]];
    }
    vertex_ids_ = std::move(vids);
    vertex_index_.clear();
    for (size_t i = 0; i < vertex_ids_.size(); ++i) vertex_index_[vertex_ids_[i]] = static_cast<int>(i);
    std::sort(arrows_.begin(), arrows_.end(),
              [](const Arrow& a, const Arrow& b) { return a.id < b.id; });
    arrow_index_.clear();
    for (size_t i = 0; i < arrows_.size(); ++i) {
      arrows_[i].src = vnew[arrows_[i].src];
      arrows_[i].tgt = vnew[arrows_[i].tgt];
      arrow_index_[arrows_[i].id] = static_cast<int>(i);
    }
  }

 private:
  std::vector<std::string> vertex_ids_;
  std::map<std::string, int> vertex_index_;
  std::vector<Arrow> arrows_;
  std::map<std::string, int> arrow_index_;
};

/// A composable arrow sequence stored source-to-target; an empty sequence is
/// the lazy path e_i (src == tgt == i). The algebra product p·q is defined
/// when target(p) == source(q) and is "p then q".
struct Path {
  int src = 0;
  int tgt = 0;
  std::vector<int> arrows;  ///< arrow indices into the owning quiver

  bool operator==(const Path& o) const {
    return src == o.src && tgt == o.tgt && arrows == o.arrows;
  }
  bool operator<(const Path& o) const {
    if (src != o.src) return src < o.src;
    if (tgt != o.tgt) return tgt < o.tgt;
    if (arrows.size() != o.arrows.size()) return arrows.size() < o.arrows.size();
    return arrows < o.arrows;
  }
};

inline Path trivial_path(int v) { return Path{v, v, {}}; }

inline int path_weight(const Quiver& q, const Path& p) {
  int w = 0;
  for (int a : p.arrows) w += q.arrow(a).weight;
  return w;
}

inline int path_degree(const Quiver& q, const Path& p) {
  int d = 0;
  for (int a : p.arrows) d += q.arrow(a).degree;
  return d;
}

inline Path concat(const Path& p, const Path& q) {
  if (p.tgt != q.src) throw InternalInconsistency("concat of non-composable paths");
  Path r{p.src, q.tgt, p.arrows};
  r.arrows.insert(r.arrows.end(), q.arrows.begin(), q.arrows.end());
  return r;
}

inline std::string path_to_string(const Quiver& q, const Path& p) {
  if (p.arrows.empty()) return "e(" + q.vertex_id(p.src) + ")";
  std::string s;
  for (size_t i = 0; i < p.arrows.size(); ++i) {
    if (i) s += ".";
    s += q.arrow(p.arrows[i]).id;
  }
  return s;
}

/// Line-based quiver text format: '#' comments, `vertex <id>`,
/// `arrow <id>: <src> -> <tgt> [weight <w>] [degree <d>]`.
inline Quiver parse_quiver(const std::string& text) {
  Quiver q;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  // Two passes so arrows may precede their vertices in the file.
  std::vector<std::pair<int, std::string>> arrow_lines;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = line;
    size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    std::istringstream ls(s);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "vertex") {
      std::string id, extra;
      if (!(ls >> id) || (ls >> extra))
        throw ParseError("line " + std::to_string(lineno) + ": expected 'vertex <id>'");
      try {
        q.add_vertex(id);
      } catch (const ValidationError& e) {
        throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
      }
    } else if (kw == "arrow") {
      arrow_lines.emplace_back(lineno, s);
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown directive '" + kw + "'");
    }
  }
  for (const auto& [ln, s] : arrow_lines) {
    std::istringstream ls(s);
    std::string kw, id, src, arr, tgt;
    ls >> kw >> id >> src >> arr >> tgt;
    if (kw != "arrow" || id.empty() || id.back() != ':' || arr != "->" || tgt.empty())
      throw ParseError("line " + std::to_string(ln) +
                       ": expected 'arrow <id>: <src> -> <tgt> [weight <w>] [degree <d>]'");
    id.pop_back();
    int weight = 0, degree = 0;
    std::string opt;
    while (ls >> opt) {
      if (opt == "weight") {
        if (!(ls >> weight)) throw ParseError("line " + std::to_string(ln) + ": bad weight");
      } else if (opt == "degree") {
        if (!(ls >> degree)) throw ParseError("line " + std::to_string(ln) + ": bad degree");
      } else {
        throw ParseError("line " + std::to_string(ln) + ": unknown option '" + opt + "'");
      }
    }
    try {
      q.add_arrow(id, src, tgt, weight, degree);
    } catch (const ValidationError& e) {
      throw ParseError("line " + std::to_string(ln) + ": " + e.what());
    }
  }
  if (q.num_vertices() == 0) throw ParseError("empty quiver description");
  q.canonicalize();
  return q;
}

/// True iff the directed graph has no directed cycle (Kahn's algorithm).
inline bool is_acyclic(const Quiver& q) {
  std::vector<int> indeg(q.num_vertices(), 0);
  for (const Arrow& a : q.arrows()) ++indeg[a.tgt];
  std::vector<int> stack;
  for (int v = 0; v < q.num_vertices(); ++v)
    if (indeg[v] == 0) stack.push_back(v);
  int seen = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++seen;
    for (const Arrow& a : q.arrows())
      if (a.src == v && --indeg[a.tgt] == 0) stack.push_back(a.tgt);
  }
  return seen == q.num_vertices();
}

/// Topological order of vertices (sources first); requires acyclicity.
inline std::vector<int> topological_order(const Quiver& q) {
  std::vector<int> indeg(q.num_vertices(), 0);
  for (const Arrow& a : q.arrows()) ++indeg[a.tgt];
  std::vector<int> order, stack;
  for (int v = q.num_vertices() - 1; v >= 0; --v)
    if (indeg[v] == 0) stack.push_back(v);
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (const Arrow& a : q.arrows())
      if (a.src == v && --indeg[a.tgt] == 0) stack.push_back(a.tgt);
  }
  if (static_cast<int>(order.size()) != q.num_vertices())
    throw ValidationError("topological_order: quiver is not acyclic");
  return order;
}

enum class DynkinType { None, A, D, E6, E7, E8 };

struct DynkinResult {
  DynkinType type = DynkinType::None;
  int n = 0;  ///< rank (number of vertices) for A_n / D_n; 6/7/8 for E types

  std::string name() const {
    switch (type) {
      case DynkinType::A: return "A" + std::to_string(n);
      case DynkinType::D: return "D" + std::to_string(n);
      case DynkinType::E6: return "E6";
      case DynkinType::E7: return "E7";
      case DynkinType::E8: return "E8";
      default: return "none";
    }
  }
};

/// Classify the underlying undirected graph as a simply laced Dynkin diagram
/// (connected tree, no multiple edges, ADE shape) or none. Orientation never
/// matters.
inline DynkinResult dynkin_type(const Quiver& q) {
  int n = q.num_vertices();
  if (n == 0) return {};
  // Undirected simple-graph adjacency; a multiple edge or loop disqualifies.
  std::vector<std::vector<int>> adj(n);
  std::map<std::pair<int, int>, int> edge_count;
  for (const Arrow& a : q.arrows()) {
    if (a.src == a.tgt) return {};
    auto key = std::minmax(a.src, a.tgt);
    if (++edge_count[{key.first, key.second}] > 1) return {};
  }
  int edges = 0;
  for (const auto& [e, c] : edge_count) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
    ++edges;
  }
  if (edges != n - 1) return {};  // a connected tree has exactly n-1 edges
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
  }
  if (reached != n) return {};
  int branch = -1;
  for (int v = 0; v < n; ++v) {
    if (adj[v].size() > 3) return {};
    if (adj[v].size() == 3) {
      if (branch >= 0) return {};
      branch = v;
    }
  }
  if (branch < 0) return {DynkinType::A, n};
  // Leg lengths from the unique branch vertex.
  std::vector<int> legs;
  for (int start : adj[branch]) {
    int len = 1, prev = branch, cur = start;
    while (true) {
      int next = -1;
      for (int w : adj[cur])
        if (w != prev) next = w;
      if (next < 0) break;
      prev = cur;
      cur = next;
      ++len;
    }
    legs.push_back(len);
  }
  std::sort(legs.begin(), legs.end());
  if (legs[0] != 1) return {};
  if (legs[1] == 1) return {DynkinType::D, legs[2] + 3};
  if (legs[1] == 2 && legs[2] == 2) return {DynkinType::E6, 6};
  if (legs[1] == 2 && legs[2] == 3) return {DynkinType::E7, 7};
  if (legs[1] == 2 && legs[2] == 4) return {DynkinType::E8, 8};
  return {};
}

namespace detail {
inline void enumerate_paths_rec(const Quiver& q, int cur, int to, int budget, Path& acc,
                                std::vector<Path>& out) {
  if (cur == to) out.push_back(acc);
  for (int a = 0; a < q.num_arrows(); ++a) {
    const Arrow& ar = q.arrow(a);
    if (ar.src != cur || ar.weight > budget) continue;
    acc.arrows.push_back(a);
    acc.tgt = ar.tgt;
    enumerate_paths_rec(q, ar.tgt, to, budget - ar.weight, acc, out);
    acc.arrows.pop_back();
    acc.tgt = cur;
  }
}

/// True iff the subgraph of weight-0 arrows has a directed cycle.
inline bool has_weight0_cycle(const Quiver& q) {
  std::vector<int> indeg(q.num_vertices(), 0);
  for (const Arrow& a : q.arrows())
    if (a.weight == 0) ++indeg[a.tgt];
  std::vector<int> stack;
  for (int v = 0; v < q.num_vertices(); ++v)
    if (indeg[v] == 0) stack.push_back(v);
  int seen = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++seen;
    for (const Arrow& a : q.arrows())
      if (a.weight == 0 && a.src == v && --indeg[a.tgt] == 0) stack.push_back(a.tgt);
  }
  return seen != q.num_vertices();
}
}  // namespace detail

/// All paths from `from` to `to` of weight ≤ max_weight, ordered by
/// (weight, length, lexicographic arrow-id sequence). Arrow index order
/// equals id order after canonicalize(), so plain index comparison is the
/// id-lexicographic comparison.
inline std::vector<Path> enumerate_paths(const Quiver& q, int from, int to, int max_weight) {
  if (max_weight < 0) throw ValidationError("enumerate_paths: negative max_weight");
  if (detail::has_weight0_cycle(q))
    throw ValidationError("enumerate_paths: quiver has a weight-0 directed cycle");
  std::vector<Path> out;
  Path acc = trivial_path(from);
  detail::enumerate_paths_rec(q, from, to, max_weight, acc, out);
  std::stable_sort(out.begin(), out.end(), [&](const Path& a, const Path& b) {
    int wa = path_weight(q, a), wb = path_weight(q, b);
    if (wa != wb) return wa < wb;
    if (a.arrows.size() != b.arrows.size()) return a.arrows.size() < b.arrows.size();
    return a.arrows < b.arrows;
  });
  return out;
}

}  // namespace ginzburg

#endif  // GINZBURG_QUIVER_HPP
