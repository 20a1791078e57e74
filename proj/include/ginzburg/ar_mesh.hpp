#ifndef GINZBURG_AR_MESH_HPP
#define GINZBURG_AR_MESH_HPP

#include <string>
#include <vector>

#include "ginzburg/path_algebra.hpp"

namespace ginzburg {

/// Vertex (i, m) of the repetitive quiver, standing for tau^{-m} P_i.
struct RepetitiveVertex {
  int i = 0;  ///< base vertex index
  int m = 0;  ///< slice
  bool operator==(const RepetitiveVertex& o) const { return i == o.i && m == o.m; }
  bool operator<(const RepetitiveVertex& o) const { return std::tie(m, i) < std::tie(o.m, o.i); }
};

inline RepetitiveVertex translate(const RepetitiveVertex& x) { return {x.i, x.m + 1}; }

/// Knitting output: dims[m][i][j] is the (virtual) dimension of tau^{-m} P_i
/// at base vertex j; entries go negative once the orbit passes a shift.
struct KnitResult {
  int slices = 0;
  std::vector<std::vector<std::vector<long>>> dims;
};

/// Dimension vectors of the indecomposable projectives: paths out of i.
inline std::vector<std::vector<long>> projective_dims(const Quiver& q) {
  std::vector<std::vector<long>> p(q.num_vertices());
  for (int i = 0; i < q.num_vertices(); ++i) {
    p[i].assign(q.num_vertices(), 0);
    for (int j = 0; j < q.num_vertices(); ++j)
      p[i][j] = static_cast<long>(enumerate_paths(q, i, j, 0).size());
  }
  return p;
}

/// Knit the repetitive quiver slice by slice:
///   dim(i, m) = sum_{arrows i->j} dim(j, m) + sum_{arrows j->i} dim(j, m-1)
///               - dim(i, m-1),
/// processing each slice sinks first so the first sum is already available.
inline KnitResult knit(const Quiver& q, int slices) {
  if (!is_acyclic(q)) throw ValidationError("knit: quiver is not acyclic");
  if (slices < 0) throw ValidationError("knit: negative slice count");
  int n = q.num_vertices();
  KnitResult out;
  out.slices = slices;
  out.dims.resize(slices + 1);
  out.dims[0] = projective_dims(q);
  std::vector<int> order = topological_order(q);
  std::reverse(order.begin(), order.end());  // sinks first
  for (int m = 1; m <= slices; ++m) {
    out.dims[m].assign(n, std::vector<long>(n, 0));
    for (int i : order) {
      std::vector<long> v(n, 0);
      for (const Arrow& ar : q.arrows()) {
        if (ar.src == i)
          for (int j = 0; j < n; ++j) v[j] += out.dims[m][ar.tgt][j];
        if (ar.tgt == i)
          for (int j = 0; j < n; ++j) v[j] += out.dims[m - 1][ar.src][j];
      }
      for (int j = 0; j < n; ++j) v[j] -= out.dims[m - 1][i][j];
      out.dims[m][i] = std::move(v);
    }
  }
  return out;
}

/// Nakayama permutation nu and shift positions N: the first slice where the
/// knitted vector at orbit i equals -dim P_j marks (i, N(j)) = P_j shifted,
/// so nu(j) = i.
struct NakayamaData {
  std::vector<int> nu, N;
};

inline NakayamaData nakayama_and_N(const Quiver& q) {
  if (dynkin_type(q).type == DynkinType::None)
    throw ValidationError("nakayama_and_N: quiver is not Dynkin");
  int n = q.num_vertices();
  NakayamaData out;
  out.nu.assign(n, -1);
  out.N.assign(n, -1);
  std::vector<std::vector<long>> proj = projective_dims(q);
  int assigned = 0;
  // The shift of every orbit appears within the Coxeter number, well below
  // this cap for any quiver this library can handle at desk scale.
  const int kMaxSlices = 4 * n + 16;
  KnitResult k = knit(q, kMaxSlices);
  for (int m = 1; m <= kMaxSlices && assigned < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        bool match = true;
        for (int c = 0; c < n; ++c)
          if (k.dims[m][i][c] != -proj[j][c]) {
            match = false;
            break;
          }
        if (match && out.nu[j] < 0) {
          out.nu[j] = i;
          out.N[j] = m;
          ++assigned;
        }
      }
  if (assigned != n)
    throw InternalInconsistency("nakayama_and_N: some orbit never reached its shift");
  return out;
}

/// A finite window of the repetitive quiver with its mesh structure, as a
/// bigraded quiver: arrows a[alpha]@m : (t(alpha),m) -> (s(alpha),m) in
/// bidegree (0,0), b[alpha]@m : (s(alpha),m) -> (t(alpha),m+1) in (1,0) and,
/// optionally, u[i]@m : (i,m) -> (nu(i), m+N(i)) in (N(i),1).
struct MeshFragment {
  Quiver base;      ///< the plain quiver this fragment repeats
  Quiver fragment;  ///< the window itself
  int slices = 0;
  bool with_u = false;
  std::vector<int> nu, N;  ///< filled when with_u

  std::string vertex_id(const RepetitiveVertex& x) const {
    return base.vertex_id(x.i) + "@" + std::to_string(x.m);
  }
  int vertex(const RepetitiveVertex& x) const { return fragment.vertex(vertex_id(x)); }
};

inline MeshFragment build_fragment(const Quiver& q, int slices, bool with_u) {
  if (!is_acyclic(q)) throw ValidationError("build_fragment: quiver is not acyclic");
  if (slices < 0) throw ValidationError("build_fragment: negative slice count");
  MeshFragment f;
  f.base = q;
  f.slices = slices;
  f.with_u = with_u;
  for (int m = 0; m <= slices; ++m)
    for (int i = 0; i < q.num_vertices(); ++i)
      f.fragment.add_vertex(f.vertex_id({i, m}));
  for (int m = 0; m <= slices; ++m)
    for (const Arrow& ar : q.arrows()) {
      f.fragment.add_arrow("a[" + ar.id + "]@" + std::to_string(m),
                           f.vertex_id({ar.tgt, m}), f.vertex_id({ar.src, m}), 0, 0);
      if (m < slices)
        f.fragment.add_arrow("b[" + ar.id + "]@" + std::to_string(m),
                             f.vertex_id({ar.src, m}), f.vertex_id({ar.tgt, m + 1}), 1, 0);
    }
  if (with_u) {
    NakayamaData nd = nakayama_and_N(q);
    f.nu = nd.nu;
    f.N = nd.N;
    for (int m = 0; m <= slices; ++m)
      for (int i = 0; i < q.num_vertices(); ++i)
        if (m + nd.N[i] <= slices)
          f.fragment.add_arrow("u[" + q.vertex_id(i) + "]@" + std::to_string(m),
                               f.vertex_id({i, m}), f.vertex_id({nd.nu[i], m + nd.N[i]}),
                               nd.N[i], 1);
  }
  f.fragment.canonicalize();
  return f;
}

namespace detail {
inline int fragment_arrow(const MeshFragment& f, char kind, const std::string& base_id, int m) {
  return f.fragment.arrow_index(std::string(1, kind) + "[" + base_id + "]@" + std::to_string(m));
}
}  // namespace detail

/// Mesh relator ending at (i, m):
///   sum_{alpha out of i} b[alpha]@(m-1) . a[alpha]@m
///   - sum_{alpha into i} a[alpha]@(m-1) . b[alpha]@(m-1),
/// a weight-1 path family (i, m-1) -> (i, m).
inline PathVector mesh_relator(const MeshFragment& f, int i, int m) {
  if (m < 1 || m > f.slices) throw ValidationError("mesh_relator: slice out of range");
  PathVector rho;
  int from = f.vertex({i, m - 1}), to = f.vertex({i, m});
  for (const Arrow& ar : f.base.arrows()) {
    if (ar.src == i) {
      int b = detail::fragment_arrow(f, 'b', ar.id, m - 1);
      int a = detail::fragment_arrow(f, 'a', ar.id, m);
      pv_add(rho, Path{from, to, {b, a}}, 1);
    }
    if (ar.tgt == i) {
      int a = detail::fragment_arrow(f, 'a', ar.id, m - 1);
      int b = detail::fragment_arrow(f, 'b', ar.id, m - 1);
      pv_add(rho, Path{from, to, {a, b}}, -1);
    }
  }
  return rho;
}

/// The fragment-path generator standing for a doubled-quiver arrow at a base
/// slice: alpha |-> a[alpha]@m, alpha* |-> b[alpha]@m. Arrows of the doubled
/// quiver are identified by base arrow id plus a star flag.
inline Path generator_path(const MeshFragment& f, const std::string& base_arrow_id, bool star,
                           int m) {
  const Arrow& ar = f.base.arrow(f.base.arrow_index(base_arrow_id));
  if (!star)
    return Path{f.vertex({ar.tgt, m}), f.vertex({ar.src, m}),
                {detail::fragment_arrow(f, 'a', base_arrow_id, m)}};
  return Path{f.vertex({ar.src, m}), f.vertex({ar.tgt, m + 1}),
              {detail::fragment_arrow(f, 'b', base_arrow_id, m)}};
}

/// All mesh relators (plus, when the fragment carries u arrows, the
/// commutation relators that slide u past every generator).
inline std::vector<PathVector> mesh_relators(const MeshFragment& f) {
  std::vector<PathVector> rels;
  for (int m = 1; m <= f.slices; ++m)
    for (int i = 0; i < f.base.num_vertices(); ++i) {
      PathVector rho = mesh_relator(f, i, m);
      if (!rho.empty()) rels.push_back(std::move(rho));
    }
  if (!f.with_u) return rels;
  // u relators: for each doubled-quiver arrow x: i -> j and base slice m,
  //   (x at m) . (u at (i, m + wt x))  =  (u at (j, m)) . (nu(x) at m + N(j)).
  struct Gen {
    std::string base_id;
    bool star;
    int src, tgt, wt;
  };
  std::vector<Gen> gens;
  for (const Arrow& ar : f.base.arrows()) {
    gens.push_back({ar.id, false, ar.src, ar.tgt, 0});
    gens.push_back({ar.id, true, ar.tgt, ar.src, 1});
  }
  auto nu_of = [&](const Gen& g) -> const Gen* {
    // The unique doubled-quiver arrow nu(src) -> nu(tgt).
    for (const Gen& h : gens)
      if (h.src == f.nu[g.src] && h.tgt == f.nu[g.tgt]) return &h;
    return nullptr;
  };
  for (const Gen& g : gens) {
    const Gen* ng = nu_of(g);
    if (!ng) throw InternalInconsistency("mesh_relators: no image arrow under nu");
    // Weight homogeneity of the twist: wt(nu x) = wt(x) + N(src) - N(tgt).
    if (ng->wt != g.wt + f.N[g.src] - f.N[g.tgt])
      throw InternalInconsistency("mesh_relators: nu is not weight-homogeneous");
    for (int m = 0; m <= f.slices; ++m) {
      int top = m + g.wt + f.N[g.src];
      if (top > f.slices || m + g.wt > f.slices || m + f.N[g.tgt] + ng->wt > f.slices) continue;
      // Note generator_path(x, m) runs (tgt_Q(x), m) -> (src_Q(x), m + wt x)
      // in the fragment, i.e. x is read against the path direction.
      Path px = generator_path(f, g.base_id, g.star, m);  // (g.tgt, m) -> (g.src, m + wt)
      int u_src = detail::fragment_arrow(f, 'u', f.base.vertex_id(g.src), m + g.wt);
      Path term1 = concat(px, Path{px.tgt, f.vertex({f.nu[g.src], top}), {u_src}});
      int u_tgt = detail::fragment_arrow(f, 'u', f.base.vertex_id(g.tgt), m);
      Path pu{f.vertex({g.tgt, m}), f.vertex({f.nu[g.tgt], m + f.N[g.tgt]}), {u_tgt}};
      Path pnx = generator_path(f, ng->base_id, ng->star, m + f.N[g.tgt]);
      Path term2 = concat(pu, pnx);
      PathVector omega;
      pv_add(omega, term1, 1);
      pv_add(omega, term2, -1);
      rels.push_back(std::move(omega));
    }
  }
  return rels;
}

/// Quotient of the fragment path algebra by the mesh (and u) relators; homs
/// in the mesh category are its blocks.
inline GradedQuotientAlgebra mesh_quotient(const MeshFragment& f) {
  return build_quotient(f.fragment, mesh_relators(f), f.slices);
}

/// Total hom dimension between two repetitive vertices in the mesh category
/// (all degrees; without u arrows everything sits in degree 0).
inline int mesh_hom(const MeshFragment& f, const GradedQuotientAlgebra& alg,
                    const RepetitiveVertex& from, const RepetitiveVertex& to) {
  int w = to.m - from.m;
  if (w < 0) return 0;
  int total = 0;
  for (int d = 0; d <= w; ++d)
    total += alg.block_dim(BlockKey{f.vertex(from), f.vertex(to), w, d});
  return total;
}

}  // namespace ginzburg

#endif  // GINZBURG_AR_MESH_HPP
