#ifndef GINZBURG_DG_HPP
#define GINZBURG_DG_HPP

#include <algorithm>
#include <iterator>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "ginzburg/parallel.hpp"
#include "ginzburg/path_algebra.hpp"

namespace ginzburg {

/// Free differential bigraded path algebra on the extended doubled quiver:
/// ordinary arrows a in bidegree (0,0), reversed arrows a* in (1,0), and one
/// loop t_i per vertex in (1,1). The differential has bidegree (0,-1); it
/// vanishes on a and a* and sends t_i to the moment-map element rho_i.
struct DgAlgebra {
  Quiver hat;
  std::vector<int> loop_arrow;        ///< vertex index -> index of its t loop
  std::vector<PathVector> d_of_loop;  ///< vertex index -> d(t_i) = rho_i
};

inline DgAlgebra build_ginzburg(const Quiver& q) {
  if (!is_acyclic(q)) throw ValidationError("build_ginzburg: quiver is not acyclic");
  for (const Arrow& a : q.arrows())
    if (a.weight != 0 || a.degree != 0)
      throw ValidationError("build_ginzburg: input must be an ordinary (bidegree-(0,0)) quiver");
  DgAlgebra dga;
  dga.hat = double_quiver(q);
  for (int v = 0; v < q.num_vertices(); ++v)
    dga.hat.add_arrow("t_" + q.vertex_id(v), q.vertex_id(v), q.vertex_id(v), 1, 1);
  dga.hat.canonicalize();
  dga.loop_arrow.resize(dga.hat.num_vertices());
  dga.d_of_loop.resize(dga.hat.num_vertices());
  for (int v = 0; v < dga.hat.num_vertices(); ++v) {
    dga.loop_arrow[v] = dga.hat.arrow_index("t_" + dga.hat.vertex_id(v));
    dga.d_of_loop[v] = preprojective_relator(dga.hat, v);
  }
  return dga;
}

/// Leibniz extension of the differential to a path: replace each letter by
/// its differential in turn, with a Koszul sign from the degree of the
/// prefix already passed.
inline PathVector differential(const DgAlgebra& dga, const Path& p) {
  PathVector out;
  int prefix_deg = 0;
  for (size_t m = 0; m < p.arrows.size(); ++m) {
    const Arrow& ar = dga.hat.arrow(p.arrows[m]);
    if (ar.degree != 0) {
      // Only t loops carry degree, and d(t_i) = rho_i.
      const PathVector& dt = dga.d_of_loop[ar.src];
      Path prefix{p.src, ar.src, {p.arrows.begin(), p.arrows.begin() + static_cast<long>(m)}};
      Path suffix{ar.tgt, p.tgt, {p.arrows.begin() + static_cast<long>(m) + 1, p.arrows.end()}};
      Rat sign = (prefix_deg % 2 == 0) ? 1 : -1;
      for (const auto& [r, c] : dt) pv_add(out, concat(concat(prefix, r), suffix), sign * c);
    }
    prefix_deg += ar.degree;
  }
  return out;
}

inline PathVector differential(const DgAlgebra& dga, const PathVector& v) {
  PathVector out;
  for (const auto& [p, c] : v)
    for (const auto& [dp, dc] : differential(dga, p)) pv_add(out, dp, c * dc);
  return out;
}

/// One weight-homogeneous family of chain complexes: paths i -> j of weight w
/// split by degree, with the differential as matrices in the path bases.
struct BlockComplex {
  int src = 0, tgt = 0, w = 0;
  std::vector<std::vector<Path>> basis;  ///< basis[d] = degree-d paths, 0 <= d <= w
  std::vector<QMatrix> d;  ///< d[k]: basis[k] -> basis[k-1]; d[0] has 0 rows

  int dim(int deg) const {
    if (deg < 0 || deg >= static_cast<int>(basis.size())) return 0;
    return static_cast<int>(basis[deg].size());
  }
};

using BlockComplexKey = std::tuple<int, int, int>;  ///< (src, tgt, w)

/// Weight truncation of the dg algebra: every (src, tgt, weight) family of
/// complexes with weight <= max_weight.
inline std::map<BlockComplexKey, BlockComplex> truncate_dg(const DgAlgebra& dga, int max_weight) {
  if (max_weight < 0) throw ValidationError("truncate_dg: negative max_weight");
  int nv = dga.hat.num_vertices();
  std::vector<std::map<BlockComplexKey, BlockComplex>> partial(static_cast<size_t>(nv) * nv);
  parallel_for(nv * nv, [&](int idx) {
    int i = idx / nv, j = idx % nv;
    std::map<int, BlockComplex> by_weight;
    for (const Path& p : enumerate_paths(dga.hat, i, j, max_weight)) {
      int w = path_weight(dga.hat, p);
      BlockComplex& bc = by_weight[w];
      if (bc.basis.empty()) {
        bc.src = i;
        bc.tgt = j;
        bc.w = w;
        bc.basis.resize(w + 1);
      }
      bc.basis[path_degree(dga.hat, p)].push_back(p);
    }
    for (auto& [w, bc] : by_weight) {
      bc.d.resize(bc.basis.size());
      for (size_t deg = 0; deg < bc.basis.size(); ++deg) {
        const std::vector<Path>& lower = deg > 0 ? bc.basis[deg - 1] : std::vector<Path>{};
        std::map<Path, int> lower_index;
        for (size_t k = 0; k < lower.size(); ++k) lower_index.emplace(lower[k], static_cast<int>(k));
        QMatrix m(static_cast<int>(lower.size()), static_cast<int>(bc.basis[deg].size()));
        for (size_t c = 0; c < bc.basis[deg].size(); ++c)
          for (const auto& [dp, dc] : differential(dga, bc.basis[deg][c])) {
            auto it = lower_index.find(dp);
            if (it == lower_index.end())
              throw InternalInconsistency("truncate_dg: differential left its block");
            m.at(it->second, static_cast<int>(c)) += dc;
          }
        bc.d[deg] = std::move(m);
      }
      partial[idx].emplace(BlockComplexKey{i, j, w}, std::move(bc));
    }
  });
  std::map<BlockComplexKey, BlockComplex> out;
  for (auto& local : partial)
    for (auto& [k, bc] : local) out.emplace(k, std::move(bc));
  return out;
}

/// dim H_d = dim C_d - rank d_d - rank d_{d+1}, one entry per degree.
inline std::vector<int> homology_dims(const BlockComplex& bc) {
  std::vector<int> ranks(bc.d.size() + 1, 0);
  for (size_t k = 0; k < bc.d.size(); ++k) ranks[k] = rank(bc.d[k]);
  std::vector<int> h(bc.basis.size());
  for (size_t deg = 0; deg < bc.basis.size(); ++deg)
    h[deg] = bc.dim(static_cast<int>(deg)) - ranks[deg] - ranks[deg + 1];
  return h;
}

namespace detail {

/// Sparse vector over Q: (index, value) pairs sorted by index, values nonzero.
using SVec = std::vector<std::pair<int, Rat>>;

/// Sparse matrix stored column-major.
struct SMat {
  int rows = 0;
  std::vector<SVec> cols;
  int ncols() const { return static_cast<int>(cols.size()); }
};

/// dst += c * src, merging sorted index lists and dropping zeros.
inline void saxpy(SVec& dst, const Rat& c, const SVec& src) {
  SVec out;
  out.reserve(dst.size() + src.size());
  size_t a = 0, b = 0;
  while (a < dst.size() || b < src.size()) {
    if (b == src.size() || (a < dst.size() && dst[a].first < src[b].first)) {
      out.push_back(dst[a++]);
    } else if (a == dst.size() || src[b].first < dst[a].first) {
      out.emplace_back(src[b].first, c * src[b].second);
      ++b;
    } else {
      Rat v = dst[a].second + c * src[b].second;
      if (v != 0) out.emplace_back(dst[a].first, std::move(v));
      ++a, ++b;
    }
  }
  dst = std::move(out);
}

/// Fully reduced row echelon form of the given sparse rows. Pivots are the
/// leading indices, chosen left to right; ties prefer the sparsest row.
struct SparseRref {
  std::vector<SVec> rows;   // pivot coefficient 1, fully reduced
  std::vector<int> pivots;  // ascending
};

inline SparseRref sparse_rref(std::vector<SVec> work) {
  SparseRref rr;
  work.erase(std::remove_if(work.begin(), work.end(), [](const SVec& r) { return r.empty(); }),
             work.end());
  while (!work.empty()) {
    size_t best = 0;
    for (size_t r = 1; r < work.size(); ++r) {
      if (work[r].front().first < work[best].front().first ||
          (work[r].front().first == work[best].front().first &&
           work[r].size() < work[best].size()))
        best = r;
    }
    SVec piv = std::move(work[best]);
    work.erase(work.begin() + static_cast<std::ptrdiff_t>(best));
    int p = piv.front().first;
    Rat inv = 1 / piv.front().second;
    for (auto& [idx, v] : piv) v *= inv;
    for (auto& row : rr.rows) {
      auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(p, Rat(0)),
                                 [](const auto& x, const auto& y) { return x.first < y.first; });
      if (it != row.end() && it->first == p) saxpy(row, -it->second, piv);
    }
    for (auto& row : work) {
      if (!row.empty() && row.front().first == p) saxpy(row, -row.front().second, piv);
    }
    work.erase(std::remove_if(work.begin(), work.end(), [](const SVec& r) { return r.empty(); }),
               work.end());
    rr.rows.push_back(std::move(piv));
    rr.pivots.push_back(p);
  }
  return rr;
}

/// Rank of a sparse matrix = number of pivots of its transposed row set.
inline int sparse_rank(const SMat& m) {
  std::vector<SVec> rows = m.cols;
  return static_cast<int>(sparse_rref(std::move(rows)).pivots.size());
}

/// Projection from k^n onto the cokernel of M (n rows): deterministic
/// non-pivot coordinates of the column span, one column of the output per
/// coordinate of k^n, one row per quotient basis vector.
inline SMat coker_projection(const SMat& m) {
  SparseRref rr = sparse_rref(m.cols);
  std::vector<int> quot_row(static_cast<size_t>(m.rows), -1);
  std::vector<bool> is_pivot(static_cast<size_t>(m.rows), false);
  for (int p : rr.pivots) is_pivot[static_cast<size_t>(p)] = true;
  int nrows = 0;
  for (int c = 0; c < m.rows; ++c)
    if (!is_pivot[static_cast<size_t>(c)]) quot_row[static_cast<size_t>(c)] = nrows++;
  SMat out;
  out.rows = nrows;
  out.cols.resize(static_cast<size_t>(m.rows));
  for (int c = 0; c < m.rows; ++c)
    if (!is_pivot[static_cast<size_t>(c)])
      out.cols[static_cast<size_t>(c)].emplace_back(quot_row[static_cast<size_t>(c)], 1);
  for (size_t r = 0; r < rr.pivots.size(); ++r) {
    SVec& col = out.cols[static_cast<size_t>(rr.pivots[r])];
    for (const auto& [c, v] : rr.rows[r])
      if (c != rr.pivots[r]) col.emplace_back(quot_row[static_cast<size_t>(c)], -v);
    std::sort(col.begin(), col.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
  }
  return out;
}

}  // namespace detail

/// Bigraded homology dimensions of the dg algebra of `q`, computed without
/// ever enumerating the path bases. The weight-w paths into a vertex j split
/// by their last letter: plain and starred last letters span subcomplexes
/// isomorphic to weight-w and weight-(w-1) families, while a trailing t_j
/// contributes a degree-shifted weight-(w-1) family mapping into them by
/// right multiplication with rho_j. Each family is therefore a mapping cone,
/// and homological perturbation collapses it onto the cone of the induced
/// map between the (already small) homologies of its pieces. The recursion
/// carries, for every block, the induced right-multiplication maps into it,
/// so all linear algebra happens on homology-sized matrices. Cross-checked
/// against the dense pipeline in the tests.
inline std::map<BlockKey, int> homology_dims_recursive(const Quiver& q, int max_weight) {
  if (max_weight < 0) throw ValidationError("homology_dims_recursive: negative max_weight");
  if (!is_acyclic(q)) throw ValidationError("homology_dims_recursive: quiver is not acyclic");
  for (const Arrow& a : q.arrows())
    if (a.weight != 0 || a.degree != 0)
      throw ValidationError("homology_dims_recursive: input must be an ordinary quiver");
  int nv = q.num_vertices();
  // Topological order with arrow sources before their targets.
  std::vector<int> indeg(static_cast<size_t>(nv), 0), topo;
  for (const Arrow& a : q.arrows()) ++indeg[static_cast<size_t>(a.tgt)];
  for (int v = 0; v < nv; ++v)
    if (indeg[static_cast<size_t>(v)] == 0) topo.push_back(v);
  for (size_t head = 0; head < topo.size(); ++head)
    for (const Arrow& a : q.arrows())
      if (a.src == topo[head] && --indeg[static_cast<size_t>(a.tgt)] == 0) topo.push_back(a.tgt);

  std::map<BlockKey, int> out;
  for (int i = 0; i < nv; ++i) {
    // Homology dims of the block family i -> j at each weight, and the
    // induced append-one-letter maps into it, keyed by (arrow, starred).
    std::map<std::pair<int, int>, std::vector<int>> h_of;
    std::map<std::tuple<int, int, int, bool>, std::vector<detail::SMat>> rho;
    for (int w = 0; w <= max_weight; ++w) {
      for (int j : topo) {
        // Summands of the subcomplex B spanned by plain/starred last letters
        // (plus the trivial path when w = 0 and j = i), per degree.
        struct Summand {
          int arrow, src_vertex, src_weight;
          bool starred;
        };
        std::vector<Summand> parts;
        for (int a = 0; a < q.num_arrows(); ++a) {
          if (q.arrow(a).tgt == j) parts.push_back({a, q.arrow(a).src, w, false});
          if (w >= 1 && q.arrow(a).src == j) parts.push_back({a, q.arrow(a).tgt, w - 1, true});
        }
        std::vector<int> bdim(static_cast<size_t>(w) + 1, 0);
        std::vector<std::vector<int>> offset(parts.size());
        for (size_t s = 0; s < parts.size(); ++s) {
          const std::vector<int>& h = h_of.at({parts[s].src_vertex, parts[s].src_weight});
          offset[s].resize(static_cast<size_t>(w) + 1, 0);
          for (int g = 0; g <= w; ++g) {
            offset[s][static_cast<size_t>(g)] = bdim[static_cast<size_t>(g)];
            if (g < static_cast<int>(h.size())) bdim[static_cast<size_t>(g)] += h[static_cast<size_t>(g)];
          }
        }
        if (w == 0 && j == i) ++bdim[0];  // the trivial path e_i
        // The trailing-t_j part A = (i -> j, w-1) shifted up by one degree,
        // mapping into B by x |-> (-1)^{|x|} x . rho_j.
        const std::vector<int>* ah = w >= 1 ? &h_of.at({j, w - 1}) : nullptr;
        auto adim = [&](int g) { return ah && g >= 1 && g - 1 < static_cast<int>(ah->size())
                                            ? (*ah)[static_cast<size_t>(g - 1)]
                                            : 0; };
        std::vector<detail::SMat> M(static_cast<size_t>(w) + 2);  // M[g]: A_g -> B_{g-1}
        for (int g = 0; g <= w + 1; ++g) {
          detail::SMat m;
          m.rows = g >= 1 && g - 1 <= w ? bdim[static_cast<size_t>(g - 1)] : 0;
          m.cols.resize(static_cast<size_t>(adim(g)));
          if (m.rows && m.ncols()) {
            Rat sign = ((g - 1) % 2 == 0) ? 1 : -1;
            for (size_t s = 0; s < parts.size(); ++s) {
              const Summand& p = parts[s];
              // Plain summand receives -x . (arrow*), starred receives +x . arrow.
              auto it = rho.find({p.src_vertex, p.src_weight, p.arrow, !p.starred});
              if (it == rho.end())
                throw InternalInconsistency("homology_dims_recursive: missing append map");
              const detail::SMat& comp = it->second[static_cast<size_t>(g - 1)];
              Rat c = p.starred ? sign : -sign;
              int off = offset[s][static_cast<size_t>(g - 1)];
              // Summand row ranges are disjoint and visited in increasing
              // order, so appending keeps each column sorted.
              for (int col = 0; col < comp.ncols(); ++col)
                for (const auto& [r, v] : comp.cols[static_cast<size_t>(col)])
                  m.cols[static_cast<size_t>(col)].emplace_back(off + r, c * v);
            }
          }
          M[static_cast<size_t>(g)] = std::move(m);
        }
        // Homology of the cone: ker on the A side plus coker on the B side.
        std::vector<int> h(static_cast<size_t>(w) + 1, 0);
        std::vector<detail::SMat> proj(static_cast<size_t>(w) + 1);
        std::vector<int> kerdim(static_cast<size_t>(w) + 1, 0);
        for (int g = 0; g <= w; ++g) {
          kerdim[static_cast<size_t>(g)] = adim(g) - detail::sparse_rank(M[static_cast<size_t>(g)]);
          proj[static_cast<size_t>(g)] = detail::coker_projection(M[static_cast<size_t>(g + 1)]);
          h[static_cast<size_t>(g)] =
              kerdim[static_cast<size_t>(g)] + proj[static_cast<size_t>(g)].rows;
        }
        h_of[{j, w}] = h;
        for (int g = 0; g <= w; ++g)
          if (h[static_cast<size_t>(g)])
            out[BlockKey{i, j, w, g}] = h[static_cast<size_t>(g)];
        // Register the induced append maps into this block: the summand
        // inclusion followed by the cokernel projection (kernel rows are 0).
        for (size_t s = 0; s < parts.size(); ++s) {
          const Summand& p = parts[s];
          const std::vector<int>& sh = h_of.at({p.src_vertex, p.src_weight});
          std::vector<detail::SMat> maps(static_cast<size_t>(w) + 1);
          for (int g = 0; g <= w; ++g) {
            int cols = g < static_cast<int>(sh.size()) ? sh[static_cast<size_t>(g)] : 0;
            detail::SMat m;
            m.rows = h[static_cast<size_t>(g)];
            m.cols.resize(static_cast<size_t>(cols));
            const detail::SMat& Q = proj[static_cast<size_t>(g)];
            for (int c = 0; c < cols; ++c)
              for (const auto& [r, v] :
                   Q.cols[static_cast<size_t>(offset[s][static_cast<size_t>(g)] + c)])
                m.cols[static_cast<size_t>(c)].emplace_back(kerdim[static_cast<size_t>(g)] + r, v);
            maps[static_cast<size_t>(g)] = std::move(m);
          }
          rho[{j, w, p.arrow, p.starred}] = std::move(maps);
        }
      }
      // Append maps are read only while building weights w and w + 1; drop
      // anything older so long runs do not accumulate stale blocks.
      for (auto it = rho.begin(); it != rho.end();)
        it = std::get<1>(it->first) < w ? rho.erase(it) : std::next(it);
    }
  }
  return out;
}

/// Hard check that each stored complex really is one: d[k-1] * d[k] = 0.
inline void verify_dg(const std::map<BlockComplexKey, BlockComplex>& cx) {
  for (const auto& [k, bc] : cx)
    for (size_t deg = 1; deg < bc.d.size(); ++deg)
      if (!(bc.d[deg - 1] * bc.d[deg]).is_zero())
        throw InternalInconsistency("verify_dg: d^2 != 0");
}

}  // namespace ginzburg

#endif  // GINZBURG_DG_HPP
