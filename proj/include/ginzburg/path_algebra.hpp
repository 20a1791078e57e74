#ifndef GINZBURG_PATH_ALGEBRA_HPP
#define GINZBURG_PATH_ALGEBRA_HPP

#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "ginzburg/linalg.hpp"
#include "ginzburg/parallel.hpp"
#include "ginzburg/quiver.hpp"

namespace ginzburg {

/// Finite rational combination of paths; the universal element type. A zero
/// coefficient is never stored.
using PathVector = std::map<Path, Rat>;

inline void pv_add(PathVector& v, const Path& p, const Rat& c) {
  if (c == 0) return;
  auto it = v.find(p);
  if (it == v.end()) {
    v.emplace(p, c);
  } else {
    it->second += c;
    if (it->second == 0) v.erase(it);
  }
}

inline PathVector pv_scale(const PathVector& v, const Rat& c) {
  PathVector out;
  if (c == 0) return out;
  for (const auto& [p, x] : v) out.emplace(p, x * c);
  return out;
}

inline PathVector pv_sum(const PathVector& a, const PathVector& b) {
  PathVector out = a;
  for (const auto& [p, c] : b) pv_add(out, p, c);
  return out;
}

/// Free concatenation product; drops non-composable pairs (product 0).
inline PathVector pv_concat(const PathVector& a, const PathVector& b) {
  PathVector out;
  for (const auto& [p, c] : a)
    for (const auto& [q, d] : b)
      if (p.tgt == q.src) pv_add(out, concat(p, q), c * d);
  return out;
}

/// (source, target, weight, degree) block address.
struct BlockKey {
  int src = 0, tgt = 0, w = 0, d = 0;
  bool operator<(const BlockKey& o) const {
    return std::tie(src, tgt, w, d) < std::tie(o.src, o.tgt, o.w, o.d);
  }
  bool operator==(const BlockKey& o) const {
    return src == o.src && tgt == o.tgt && w == o.w && d == o.d;
  }
};

/// The bidegree-homogeneous block a single path lives in.
inline BlockKey block_of(const Quiver& q, const Path& p) {
  return BlockKey{p.src, p.tgt, path_weight(q, p), path_degree(q, p)};
}

/// One homogeneous block of a quotient algebra: the full path list, the rref
/// of the relator span in path coordinates, and the complement (normal-form)
/// basis given by the non-pivot paths.
struct Block {
  std::vector<Path> paths;        ///< enumerate_paths order
  std::map<Path, int> path_index;
  QMatrix relspan_rref;           ///< rows: independent relator-span vectors
  std::vector<int> pivot_cols;
  std::vector<int> basis_cols;    ///< non-pivot path indices = normal-form basis
};

/// Weight-truncated bigraded path algebra modulo a homogeneous two-sided
/// ideal, stored as per-block normal forms. An empty relator list yields the
/// free path algebra.
class GradedQuotientAlgebra {
 public:
  GradedQuotientAlgebra() = default;

  /// See build_quotient() for the usual entry point.
  GradedQuotientAlgebra(Quiver q, std::vector<PathVector> relators, int max_weight)
      : quiver_(std::move(q)), relators_(std::move(relators)), max_weight_(max_weight) {
    if (max_weight_ < 0) throw ValidationError("build_quotient: negative max_weight");
    for (const PathVector& r : relators_) {
      if (r.empty()) throw ValidationError("build_quotient: zero relator");
      BlockKey k = block_of(quiver_, r.begin()->first);
      for (const auto& [p, c] : r)
        if (!(block_of(quiver_, p) == k))
          throw ValidationError("build_quotient: inhomogeneous relator");
    }
    build_blocks();
  }

  const Quiver& quiver() const { return quiver_; }
  int max_weight() const { return max_weight_; }
  const std::vector<PathVector>& relators() const { return relators_; }
  const std::map<BlockKey, Block>& blocks() const { return blocks_; }

  const Block* block(const BlockKey& k) const {
    auto it = blocks_.find(k);
    return it == blocks_.end() ? nullptr : &it->second;
  }

  int block_dim(const BlockKey& k) const {
    const Block* b = block(k);
    return b ? static_cast<int>(b->basis_cols.size()) : 0;
  }

  /// Normal-form basis elements of a block, as single-path representatives.
  std::vector<Path> basis(const BlockKey& k) const {
    std::vector<Path> out;
    if (const Block* b = block(k))
      for (int c : b->basis_cols) out.push_back(b->paths[c]);
    return out;
  }

  /// Reduce an arbitrary element to its normal form (per-block projection to
  /// the relator-span complement).
  PathVector reduce(const PathVector& v) const {
    // Split into homogeneous blocks first.
    std::map<BlockKey, PathVector> parts;
    for (const auto& [p, c] : v) parts[block_of(quiver_, p)].emplace(p, c);
    PathVector out;
    for (auto& [k, part] : parts) {
      if (k.w > max_weight_)
        throw TruncationOverflow("reduce: weight " + std::to_string(k.w) +
                                 " exceeds truncation " + std::to_string(max_weight_));
      const Block* b = block(k);
      if (!b) throw InternalInconsistency("reduce: unknown block");
      std::vector<Rat> coords(b->paths.size());
      for (const auto& [p, c] : part) {
        auto it = b->path_index.find(p);
        if (it == b->path_index.end()) throw InternalInconsistency("reduce: path outside block basis");
        coords[it->second] = c;
      }
      // Eliminate pivot coordinates with the stored rref rows.
      for (size_t r = 0; r < b->pivot_cols.size(); ++r) {
        const Rat& x = coords[b->pivot_cols[r]];
        if (x == 0) continue;
        Rat f = x;  // pivot entry is 1
        for (int c = 0; c < b->relspan_rref.cols(); ++c) {
          const Rat& e = b->relspan_rref.at(static_cast<int>(r), c);
          if (e != 0) coords[c] -= f * e;
        }
      }
      for (size_t i = 0; i < coords.size(); ++i)
        if (coords[i] != 0) pv_add(out, b->paths[i], coords[i]);
    }
    return out;
  }

  /// Product of (reduced) elements, reduced to normal form. Zero when
  /// endpoints mismatch; error when the combined weight leaves the truncation.
  PathVector multiply(const PathVector& x, const PathVector& y) const {
    PathVector prod;
    for (const auto& [p, c] : x)
      for (const auto& [q, d] : y) {
        if (p.tgt != q.src) continue;
        Path pq = concat(p, q);
        if (path_weight(quiver_, pq) > max_weight_)
          throw TruncationOverflow("multiply: combined weight exceeds truncation");
        pv_add(prod, pq, c * d);
      }
    return reduce(prod);
  }

  /// Normal-form coordinates of a (reduced or unreduced) homogeneous element
  /// within one block, in basis order.
  std::vector<Rat> coordinates(const BlockKey& k, const PathVector& v) const {
    const Block* b = block(k);
    if (!b) {
      if (!v.empty()) throw InternalInconsistency("coordinates: element in unknown block");
      return {};
    }
    PathVector red = reduce(v);
    std::vector<Rat> out(b->basis_cols.size());
    for (const auto& [p, c] : red) {
      if (!(block_of(quiver_, p) == k))
        throw InternalInconsistency("coordinates: element is not homogeneous in the block");
      auto it = b->path_index.find(p);
      int col = it->second;
      // Locate col among basis columns.
      int pos = -1;
      for (size_t i = 0; i < b->basis_cols.size(); ++i)
        if (b->basis_cols[i] == col) {
          pos = static_cast<int>(i);
          break;
        }
      if (pos < 0) throw InternalInconsistency("coordinates: reduced element off basis");
      out[pos] = c;
    }
    return out;
  }

  /// Bigraded Hilbert table: (weight, degree) -> dimension, summed over
  /// (source, target).
  std::map<std::pair<int, int>, int> hilbert_series() const {
    std::map<std::pair<int, int>, int> h;
    for (const auto& [k, b] : blocks_)
      if (!b.basis_cols.empty()) h[{k.w, k.d}] += static_cast<int>(b.basis_cols.size());
    return h;
  }

  /// Per-(source,target,weight,degree) dimension table.
  std::map<BlockKey, int> block_dims() const {
    std::map<BlockKey, int> h;
    for (const auto& [k, b] : blocks_)
      if (!b.basis_cols.empty()) h[k] = static_cast<int>(b.basis_cols.size());
    return h;
  }

 private:
  void build_blocks() {
    int nv = quiver_.num_vertices();
    // Pre-index relators by endpoints.
    struct RelInfo {
      const PathVector* r;
      int src, tgt, w, d;
    };
    std::vector<RelInfo> rels;
    for (const PathVector& r : relators_) {
      BlockKey k = block_of(quiver_, r.begin()->first);
      rels.push_back({&r, k.src, k.tgt, k.w, k.d});
    }
    // Enumerate per-(source,target) path lists in parallel, then carve blocks.
    std::vector<std::vector<Path>> st_paths(static_cast<size_t>(nv) * nv);
    parallel_for(nv * nv, [&](int idx) {
      st_paths[idx] = enumerate_paths(quiver_, idx / nv, idx % nv, max_weight_);
    });
    std::vector<std::map<BlockKey, Block>> partial(static_cast<size_t>(nv) * nv);
    parallel_for(nv * nv, [&](int idx) {
      int i = idx / nv, j = idx % nv;
      std::map<BlockKey, Block>& local = partial[idx];
      for (const Path& p : st_paths[idx]) {
        BlockKey k = block_of(quiver_, p);
        Block& b = local[k];
        b.path_index.emplace(p, static_cast<int>(b.paths.size()));
        b.paths.push_back(p);
      }
      for (auto& [k, b] : local) {
        // Span of p · r · q inside this block.
        std::vector<std::vector<Rat>> rows;
        for (const RelInfo& ri : rels) {
          if (ri.w > k.w) continue;
          for (const Path& p : st_paths[static_cast<size_t>(i) * nv + ri.src]) {
            int wp = path_weight(quiver_, p);
            if (wp + ri.w > k.w) continue;
            int dp = path_degree(quiver_, p);
            for (const Path& s : st_paths[static_cast<size_t>(ri.tgt) * nv + j]) {
              if (wp + ri.w + path_weight(quiver_, s) != k.w) continue;
              if (dp + ri.d + path_degree(quiver_, s) != k.d) continue;
              std::vector<Rat> row(b.paths.size());
              for (const auto& [rp, rc] : *ri.r) {
                Path full = concat(concat(p, rp), s);
                auto it = b.path_index.find(full);
                if (it == b.path_index.end())
                  throw InternalInconsistency("relator instance escaped its block");
                row[it->second] += rc;
              }
              bool nonzero = false;
              for (const Rat& x : row)
                if (x != 0) {
                  nonzero = true;
                  break;
                }
              if (nonzero) rows.push_back(std::move(row));
            }
          }
        }
        QMatrix span(static_cast<int>(rows.size()), static_cast<int>(b.paths.size()));
        for (size_t r = 0; r < rows.size(); ++r)
          for (size_t c = 0; c < rows[r].size(); ++c) span.at(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
        RrefResult rr = rref(std::move(span));
        int rk = static_cast<int>(rr.pivots.size());
        QMatrix compact(rk, static_cast<int>(b.paths.size()));
        for (int r = 0; r < rk; ++r)
          for (int c = 0; c < compact.cols(); ++c) compact.at(r, c) = rr.r.at(r, c);
        b.relspan_rref = std::move(compact);
        b.pivot_cols = rr.pivots;
        std::vector<bool> is_pivot(b.paths.size(), false);
        for (int p : rr.pivots) is_pivot[p] = true;
        for (size_t c = 0; c < b.paths.size(); ++c)
          if (!is_pivot[c]) b.basis_cols.push_back(static_cast<int>(c));
      }
    });
    for (auto& local : partial)
      for (auto& [k, b] : local) blocks_.emplace(k, std::move(b));
  }

  Quiver quiver_;
  std::vector<PathVector> relators_;
  int max_weight_ = 0;
  std::map<BlockKey, Block> blocks_;
};

inline GradedQuotientAlgebra build_quotient(Quiver q, std::vector<PathVector> relators,
                                            int max_weight) {
  return GradedQuotientAlgebra(std::move(q), std::move(relators), max_weight);
}

/// Doubled quiver: for every weight-(0,0) arrow a add a reversed arrow a*
/// with bidegree (1,0). Star ids are "<id>*".
inline Quiver double_quiver(const Quiver& q) {
  Quiver dq;
  for (int v = 0; v < q.num_vertices(); ++v) dq.add_vertex(q.vertex_id(v));
  for (const Arrow& a : q.arrows()) {
    dq.add_arrow(a.id, q.vertex_id(a.src), q.vertex_id(a.tgt), 0, 0);
    dq.add_arrow(a.id + "*", q.vertex_id(a.tgt), q.vertex_id(a.src), 1, 0);
  }
  dq.canonicalize();
  return dq;
}

/// Preprojective relator at vertex i of the doubled quiver, in the global
/// source-to-target convention: outgoing arrows contribute +(a then a*),
/// incoming contribute −(b* then b); every term is a length-2 loop at i.
inline PathVector preprojective_relator(const Quiver& dq, int i) {
  PathVector rho;
  for (int a = 0; a < dq.num_arrows(); ++a) {
    const Arrow& ar = dq.arrow(a);
    if (ar.weight != 0) continue;  // stars are handled through their partner
    int star = dq.arrow_index(ar.id + "*");
    if (ar.src == i) pv_add(rho, Path{i, i, {a, star}}, 1);
    if (ar.tgt == i) pv_add(rho, Path{i, i, {star, a}}, -1);
  }
  return rho;
}

/// Preprojective algebra Λ_Q = k·(doubled quiver) / (ρ_i), truncated by weight.
inline GradedQuotientAlgebra preprojective(const Quiver& q, int max_weight) {
  if (!is_acyclic(q)) throw ValidationError("preprojective: quiver is not acyclic");
  for (const Arrow& a : q.arrows())
    if (a.weight != 0 || a.degree != 0)
      throw ValidationError("preprojective: input must be an ordinary (bidegree-(0,0)) quiver");
  Quiver dq = double_quiver(q);
  std::vector<PathVector> rels;
  for (int i = 0; i < dq.num_vertices(); ++i) {
    PathVector rho = preprojective_relator(dq, i);
    if (!rho.empty()) rels.push_back(std::move(rho));
  }
  return build_quotient(std::move(dq), std::move(rels), max_weight);
}

}  // namespace ginzburg

#endif  // GINZBURG_PATH_ALGEBRA_HPP
