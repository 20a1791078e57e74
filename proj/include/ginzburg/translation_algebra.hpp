#ifndef GINZBURG_TRANSLATION_ALGEBRA_HPP
#define GINZBURG_TRANSLATION_ALGEBRA_HPP

#include <string>
#include <utility>
#include <vector>

#include "ginzburg/ar_mesh.hpp"

namespace ginzburg {

/// Twisted polynomial algebra: the preprojective algebra of a Dynkin quiver
/// with one extra generator u_i : nu(i) -> i per vertex in bidegree (N(i), 1)
/// and the commutation relators u_{s} x = nu(x) u_{t} for every doubled-quiver
/// arrow x : s -> t.
struct TwistedAlgebra {
  GradedQuotientAlgebra alg;
  NakayamaData nd;
  std::vector<int> u_arrow;  ///< vertex i -> arrow index of u_i in alg.quiver()
};

inline TwistedAlgebra build_twisted(const Quiver& q, int max_weight) {
  if (dynkin_type(q).type == DynkinType::None)
    throw ValidationError("build_twisted: quiver is not Dynkin");
  NakayamaData nd = nakayama_and_N(q);
  Quiver tq = double_quiver(q);
  for (int i = 0; i < q.num_vertices(); ++i)
    tq.add_arrow("u[" + q.vertex_id(i) + "]", q.vertex_id(nd.nu[i]), q.vertex_id(i), nd.N[i], 1);
  tq.canonicalize();
  std::vector<PathVector> rels;
  for (int i = 0; i < tq.num_vertices(); ++i) {
    PathVector rho = preprojective_relator(tq, i);
    if (!rho.empty()) rels.push_back(std::move(rho));
  }
  std::vector<int> u_arrow(q.num_vertices());
  for (int i = 0; i < q.num_vertices(); ++i)
    u_arrow[i] = tq.arrow_index("u[" + q.vertex_id(i) + "]");
  // Doubled-quiver generators with their twists.
  struct Gen {
    int arrow, src, tgt;
  };
  std::vector<Gen> gens;
  for (const Arrow& ar : q.arrows()) {
    int plain = tq.arrow_index(ar.id);
    int star = tq.arrow_index(ar.id + "*");
    gens.push_back({plain, tq.arrow(plain).src, tq.arrow(plain).tgt});
    gens.push_back({star, tq.arrow(star).src, tq.arrow(star).tgt});
  }
  for (const Gen& g : gens) {
    // The unique doubled-quiver arrow nu(src) -> nu(tgt).
    const Gen* ng = nullptr;
    for (const Gen& h : gens)
      if (h.src == nd.nu[g.src] && h.tgt == nd.nu[g.tgt]) ng = &h;
    if (!ng) throw InternalInconsistency("build_twisted: generator has no image under nu");
    if (tq.arrow(ng->arrow).weight != tq.arrow(g.arrow).weight + nd.N[g.src] - nd.N[g.tgt])
      throw InternalInconsistency("build_twisted: nu is not weight-homogeneous");
    PathVector omega;
    pv_add(omega, Path{nd.nu[g.src], g.tgt, {u_arrow[g.src], g.arrow}}, 1);
    pv_add(omega, Path{nd.nu[g.src], g.tgt, {ng->arrow, u_arrow[g.tgt]}}, -1);
    rels.push_back(std::move(omega));
  }
  return TwistedAlgebra{build_quotient(std::move(tq), std::move(rels), max_weight), std::move(nd),
                        std::move(u_arrow)};
}

/// The derived translation algebra, realized through the u-extended mesh
/// fragment: U(i, j, w, d) is the degree-d hom space (j,0) -> (i,w). For a
/// non-Dynkin quiver there are no u arrows and U is the preprojective algebra
/// in degree 0.
class UAlgebra {
 public:
  UAlgebra(const Quiver& q, int max_weight)
      : dynkin_(dynkin_type(q).type != DynkinType::None),
        frag_(build_fragment(q, max_weight, dynkin_)),
        alg_(mesh_quotient(frag_)),
        max_weight_(max_weight) {}

  bool dynkin() const { return dynkin_; }
  int max_weight() const { return max_weight_; }
  const MeshFragment& fragment() const { return frag_; }
  const GradedQuotientAlgebra& algebra() const { return alg_; }

  int dim(const BlockKey& k) const {
    if (k.w < 0 || k.w > max_weight_) return 0;
    return alg_.block_dim(fragment_key(k));
  }

  /// All nonzero blocks in base-quiver labels.
  std::map<BlockKey, int> dims() const {
    int n = frag_.base.num_vertices();
    std::map<BlockKey, int> out;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int w = 0; w <= max_weight_; ++w)
          for (int d = 0; d <= w; ++d) {
            int x = dim(BlockKey{i, j, w, d});
            if (x) out[BlockKey{i, j, w, d}] = x;
          }
    return out;
  }

  /// Fragment-quotient block behind U(i, j, w, d).
  BlockKey fragment_key(const BlockKey& k) const {
    return BlockKey{frag_.vertex({k.tgt, 0}), frag_.vertex({k.src, k.w}), k.w, k.d};
  }

  /// Shift a fragment path v slices up.
  Path shift_path(const Path& p, int v) const {
    if (v == 0) return p;
    Path out;
    std::vector<int> arrows;
    for (int a : p.arrows) {
      const std::string& id = frag_.fragment.arrow(a).id;
      size_t at = id.rfind('@');
      int m = std::stoi(id.substr(at + 1));
      arrows.push_back(frag_.fragment.arrow_index(id.substr(0, at + 1) + std::to_string(m + v)));
    }
    auto relabel = [&](int vtx) {
      const std::string& id = frag_.fragment.vertex_id(vtx);
      size_t at = id.rfind('@');
      int m = std::stoi(id.substr(at + 1));
      return frag_.fragment.vertex(id.substr(0, at + 1) + std::to_string(m + v));
    };
    return Path{relabel(p.src), relabel(p.tgt), std::move(arrows)};
  }

  /// Product: x in U(i,j,*), y in U(j,k,v) compose to the fragment path of y
  /// followed by the shift of x by v slices.
  PathVector multiply(const PathVector& x, const PathVector& y, int v) const {
    PathVector prod;
    for (const auto& [py, cy] : y)
      for (const auto& [px, cx] : x) {
        Path sx = shift_path(px, v);
        if (py.tgt != sx.src) continue;
        pv_add(prod, concat(py, sx), cx * cy);
      }
    return alg_.reduce(prod);
  }

 private:
  bool dynkin_;
  MeshFragment frag_;
  GradedQuotientAlgebra alg_;
  int max_weight_;
};

/// Per-block comparison of two bigraded dimension tables, with the total
/// Hilbert tables kept for reporting.
struct CompareResult {
  int blocks_checked = 0;
  std::vector<BlockKey> mismatches;
  std::map<std::pair<int, int>, int> hilbert_a, hilbert_b;

  bool ok() const { return mismatches.empty(); }
};

inline CompareResult compare_bigraded(const std::map<BlockKey, int>& a,
                                      const std::map<BlockKey, int>& b) {
  CompareResult out;
  std::map<BlockKey, std::pair<int, int>> merged;
  for (const auto& [k, v] : a) {
    merged[k].first = v;
    out.hilbert_a[{k.w, k.d}] += v;
  }
  for (const auto& [k, v] : b) {
    merged[k].second = v;
    out.hilbert_b[{k.w, k.d}] += v;
  }
  for (const auto& [k, ab] : merged) {
    ++out.blocks_checked;
    if (ab.first != ab.second) out.mismatches.push_back(k);
  }
  return out;
}

/// Image of a twisted-algebra basis path under the canonical map to the
/// fragment: letters are read from the target end, each placed at the slice
/// reached so far. alpha |-> a[alpha]@m, alpha* |-> b[alpha]@m, u_i |-> u[i]@m.
inline Path twisted_to_fragment(const TwistedAlgebra& t, const UAlgebra& u, const Path& p) {
  const Quiver& tq = t.alg.quiver();
  const MeshFragment& f = u.fragment();
  int slice = 0;
  Path img = trivial_path(f.vertex({p.tgt, 0}));
  for (size_t pos = p.arrows.size(); pos-- > 0;) {
    const Arrow& ar = tq.arrow(p.arrows[pos]);
    const std::string& id = ar.id;
    Path step;
    if (id.size() > 2 && id.substr(0, 2) == "u[") {
      std::string base = id.substr(2, id.size() - 3);
      int i = f.base.vertex(base);
      step = Path{f.vertex({i, slice}), f.vertex({f.nu[i], slice + f.N[i]}),
                  {f.fragment.arrow_index("u[" + base + "]@" + std::to_string(slice))}};
    } else if (!id.empty() && id.back() == '*') {
      step = generator_path(f, id.substr(0, id.size() - 1), true, slice);
    } else {
      step = generator_path(f, id, false, slice);
    }
    img = concat(img, step);
    slice += ar.weight;
  }
  return img;
}

inline PathVector twisted_to_fragment(const TwistedAlgebra& t, const UAlgebra& u,
                                      const PathVector& v) {
  PathVector out;
  for (const auto& [p, c] : v) pv_add(out, twisted_to_fragment(t, u, p), c);
  return out;
}

/// Constructive isomorphism check between the twisted polynomial algebra and
/// the derived translation algebra: the generator-wise map must kill every
/// relator and restrict to a bijection on every block. Throws on failure.
inline void verify_twisted_iso(const TwistedAlgebra& t, const UAlgebra& u) {
  if (!u.dynkin()) throw ValidationError("verify_twisted_iso: U is not of Dynkin type");
  for (const PathVector& r : t.alg.relators()) {
    if (block_of(t.alg.quiver(), r.begin()->first).w > u.max_weight()) continue;
    if (!u.algebra().reduce(twisted_to_fragment(t, u, r)).empty())
      throw InternalInconsistency("verify_twisted_iso: a relator does not map to zero");
  }
  for (const auto& [k, dim] : t.alg.block_dims()) {
    BlockKey fk = u.fragment_key(k);
    int udim = u.dim(k);
    if (udim != dim) throw InternalInconsistency("verify_twisted_iso: block dimension mismatch");
    std::vector<std::vector<Rat>> cols;
    for (const Path& p : t.alg.basis(k)) {
      PathVector img = u.algebra().reduce(PathVector{{twisted_to_fragment(t, u, p), Rat(1)}});
      cols.push_back(u.algebra().coordinates(fk, img));
    }
    if (rank(QMatrix::from_columns(udim, cols)) != dim)
      throw InternalInconsistency("verify_twisted_iso: map is not bijective on a block");
  }
  // And nothing extra on the U side.
  std::map<BlockKey, int> ud = u.dims();
  if (!compare_bigraded(t.alg.block_dims(), ud).ok())
    throw InternalInconsistency("verify_twisted_iso: dimension tables differ");
}

/// Triangle-based prediction for the cyclic triple products on degree-0
/// classes: mu_3 on (x1, x2, x3) with x_k in block (s_k, t_k, w_k, 0) is
/// nonzero exactly when the four repetitive objects
///   X = (t3, 0), Y = (s3, w3), Z = (s2, w2 + w3), W = (s1, w1 + w2 + w3)
/// form a triangle ending in a shift: W = X[1] and dim X + dim Z = dim Y.
struct Mu3Prediction {
  bool nonzero = false;
  BlockKey target;  ///< 1-dimensional when nonzero
};

inline Mu3Prediction mu3_prediction(const NakayamaData& nd, const KnitResult& k, const BlockKey& k1,
                                    const BlockKey& k2, const BlockKey& k3) {
  Mu3Prediction out;
  if (k1.d != 0 || k2.d != 0 || k3.d != 0) return out;
  if (k1.tgt != k2.src || k2.tgt != k3.src) return out;
  int w = k1.w + k2.w + k3.w;
  if (k1.src != nd.nu[k3.tgt] || w != nd.N[k3.tgt]) return out;
  if (k2.w + k3.w > k.slices || k3.w > k.slices)
    throw ValidationError("mu3_prediction: knitting window too small");
  int n = static_cast<int>(k.dims[0].size());
  for (int j = 0; j < n; ++j)
    if (k.dims[0][k3.tgt][j] + k.dims[k2.w + k3.w][k2.src][j] != k.dims[k3.w][k3.src][j])
      return out;
  out.nonzero = true;
  out.target = BlockKey{k1.src, k3.tgt, w, 1};
  return out;
}

}  // namespace ginzburg

#endif  // GINZBURG_TRANSLATION_ALGEBRA_HPP
