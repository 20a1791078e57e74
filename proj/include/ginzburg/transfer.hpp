#ifndef GINZBURG_TRANSFER_HPP
#define GINZBURG_TRANSFER_HPP

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ginzburg/dg.hpp"

namespace ginzburg {

/// Deformation retraction of one (src, tgt, w) family of complexes onto its
/// homology. Per degree d: inclusion j[d] (chains x classes), projection q[d]
/// (classes x chains) and homotopy phi[d] (degree-(d+1) chains x degree-d
/// chains), satisfying q j = 1, phi j = 0, q phi = 0, phi phi = 0 and
/// d phi + phi d = 1 - j q.
struct Retraction {
  std::vector<QMatrix> j, q, phi;

  int h_dim(int deg) const {
    if (deg < 0 || deg >= static_cast<int>(q.size())) return 0;
    return q[static_cast<size_t>(deg)].rows();
  }
};

/// Split C_d = B_d + H_d + A_d where B_d = im d_{d+1}, B + H = ker d_d, and
/// A_d is spanned by unit vectors at the pivot columns of rref(d_d). The
/// homotopy sends the boundary d_{d+1} e_c (c a pivot column of
/// rref(d_{d+1})) back to e_c and kills H and A.
inline Retraction homology_and_retraction(const BlockComplex& bc) {
  int top = static_cast<int>(bc.basis.size());
  Retraction ret;
  ret.j.resize(top);
  ret.q.resize(top);
  ret.phi.resize(top);
  std::vector<RrefResult> rr(top + 1);
  for (int d = 0; d < top; ++d) rr[d] = rref(bc.d[d]);
  for (int d = 0; d < top; ++d) {
    int n = bc.dim(d);
    // Boundary basis and the preimage columns defining phi.
    const std::vector<int>& up_pivots = (d + 1 < top) ? rr[d + 1].pivots : std::vector<int>{};
    std::vector<std::vector<Rat>> boundaries;
    for (int c : up_pivots) boundaries.push_back(bc.d[d + 1].column(c));
    // Kernel of the outgoing differential.
    std::vector<std::vector<Rat>> ker = kernel_basis(bc.d[d]);
    // Extend the boundaries to a kernel basis; the appended kernel vectors
    // that become pivots are the homology representatives.
    QMatrix ext(n, static_cast<int>(boundaries.size() + ker.size()));
    for (size_t c = 0; c < boundaries.size(); ++c)
      for (int r = 0; r < n; ++r) ext.at(r, static_cast<int>(c)) = boundaries[c][r];
    for (size_t c = 0; c < ker.size(); ++c)
      for (int r = 0; r < n; ++r) ext.at(r, static_cast<int>(boundaries.size() + c)) = ker[c][r];
    RrefResult er = rref(ext);
    std::vector<std::vector<Rat>> homreps;
    for (int p : er.pivots) {
      if (p < static_cast<int>(boundaries.size())) continue;
      homreps.push_back(ker[p - boundaries.size()]);
    }
    // Complement of the kernel: unit vectors at the pivot columns of rref(d_d).
    std::vector<std::vector<Rat>> compl_vecs;
    for (int p : rr[d].pivots) {
      std::vector<Rat> e(n);
      e[p] = 1;
      compl_vecs.push_back(std::move(e));
    }
    int nb = static_cast<int>(boundaries.size());
    int nh = static_cast<int>(homreps.size());
    int na = static_cast<int>(compl_vecs.size());
    if (nb + nh + na != n)
      throw InternalInconsistency("homology_and_retraction: B+H+A does not fill the chain space");
    QMatrix basis_mat(n, n);
    for (int c = 0; c < nb; ++c)
      for (int r = 0; r < n; ++r) basis_mat.at(r, c) = boundaries[c][r];
    for (int c = 0; c < nh; ++c)
      for (int r = 0; r < n; ++r) basis_mat.at(r, nb + c) = homreps[c][r];
    for (int c = 0; c < na; ++c)
      for (int r = 0; r < n; ++r) basis_mat.at(r, nb + nh + c) = compl_vecs[c][r];
    QMatrix coords = inverse(basis_mat);
    QMatrix j(n, nh);
    for (int c = 0; c < nh; ++c)
      for (int r = 0; r < n; ++r) j.at(r, c) = homreps[c][r];
    QMatrix q(nh, n);
    for (int r = 0; r < nh; ++r)
      for (int c = 0; c < n; ++c) q.at(r, c) = coords.at(nb + r, c);
    int n_up = bc.dim(d + 1);
    QMatrix phi(n_up, n);
    for (int r = 0; r < nb; ++r) {
      // phi(b_r) = e_{c_r} in degree d+1; phi kills H and A.
      int cr = up_pivots[r];
      for (int c = 0; c < n; ++c) phi.at(cr, c) = coords.at(r, c);
    }
    ret.j[d] = std::move(j);
    ret.q[d] = std::move(q);
    ret.phi[d] = std::move(phi);
  }
  // Gauge normalization phi -> phi d phi (idempotent here, but applied so the
  // stored homotopy is always in normalized form).
  for (int d = 0; d + 1 < top; ++d) ret.phi[d] = ret.phi[d] * bc.d[d + 1] * ret.phi[d];
  return ret;
}

/// Check all five side conditions; throws on the first failure.
inline void verify_retraction(const BlockComplex& bc, const Retraction& ret) {
  int top = static_cast<int>(bc.basis.size());
  for (int d = 0; d < top; ++d) {
    int n = bc.dim(d);
    int nh = ret.q[d].rows();
    if (!(ret.q[d] * ret.j[d] == QMatrix::identity(nh)))
      throw InternalInconsistency("retraction: q j != 1");
    QMatrix hom = QMatrix::zero(n, n);
    if (d + 1 < top) hom = hom + bc.d[d + 1] * ret.phi[d];
    if (d > 0) hom = hom + ret.phi[d - 1] * bc.d[d];
    if (!(hom == QMatrix::identity(n) - ret.j[d] * ret.q[d]))
      throw InternalInconsistency("retraction: d phi + phi d != 1 - j q");
    if (!(ret.phi[d] * ret.j[d]).is_zero())
      throw InternalInconsistency("retraction: phi j != 0");
    if (d + 1 < top && !(ret.q[d + 1] * ret.phi[d]).is_zero())
      throw InternalInconsistency("retraction: q phi != 0");
    if (d + 1 < top && !(ret.phi[d + 1] * ret.phi[d]).is_zero())
      throw InternalInconsistency("retraction: phi phi != 0");
  }
}

/// Planar binary rooted tree with >= 1 leaves; leaves have no children.
struct PBRTree {
  std::shared_ptr<PBRTree> l, r;
  int leaves = 1;

  bool is_leaf() const { return !l; }
};

inline std::shared_ptr<PBRTree> pbr_leaf() { return std::make_shared<PBRTree>(); }

inline std::shared_ptr<PBRTree> pbr_node(std::shared_ptr<PBRTree> l, std::shared_ptr<PBRTree> r) {
  auto t = std::make_shared<PBRTree>();
  t->leaves = l->leaves + r->leaves;
  t->l = std::move(l);
  t->r = std::move(r);
  return t;
}

/// All planar binary rooted trees with n leaves (Catalan(n-1) of them),
/// ordered by the size of the left subtree, recursively.
inline std::vector<std::shared_ptr<PBRTree>> enumerate_pbr(int n) {
  if (n < 1) throw ValidationError("enumerate_pbr: need at least one leaf");
  if (n == 1) return {pbr_leaf()};
  std::vector<std::shared_ptr<PBRTree>> out;
  for (int k = 1; k < n; ++k)
    for (const auto& l : enumerate_pbr(k))
      for (const auto& r : enumerate_pbr(n - k)) out.push_back(pbr_node(l, r));
  return out;
}

namespace detail {
inline void preorder_internal(const PBRTree* t, std::vector<const PBRTree*>& out) {
  if (t->is_leaf()) return;
  out.push_back(t);
  preorder_internal(t->l.get(), out);
  preorder_internal(t->r.get(), out);
}
inline void inorder_internal(const PBRTree* t, std::vector<const PBRTree*>& out) {
  if (t->is_leaf()) return;
  inorder_internal(t->l.get(), out);
  out.push_back(t);
  inorder_internal(t->r.get(), out);
}
}  // namespace detail

/// Sign of the permutation comparing the preorder and inorder numberings of
/// the internal nodes.
inline int tree_sign(const PBRTree& t) {
  std::vector<const PBRTree*> pre, in;
  detail::preorder_internal(&t, pre);
  detail::inorder_internal(&t, in);
  std::map<const PBRTree*, int> in_pos;
  for (size_t i = 0; i < in.size(); ++i) in_pos[in[i]] = static_cast<int>(i);
  std::vector<int> perm(pre.size());
  for (size_t i = 0; i < pre.size(); ++i) perm[i] = in_pos[pre[i]];
  int sign = 1;
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) sign = -sign;
  return sign;
}

/// One homology class: a block and a basis index within it.
struct HClass {
  BlockKey k;
  int idx = 0;
  bool operator<(const HClass& o) const {
    if (!(k == o.k)) return k < o.k;
    return idx < o.idx;
  }
  bool operator==(const HClass& o) const { return k == o.k && idx == o.idx; }
};

/// Value of one structure map evaluation: homology classes with coefficients.
using HVector = std::map<HClass, Rat>;

/// Table of all nonzero structure maps mu_n on tuples of homology basis
/// classes; absent tuples evaluate to zero.
struct AInfinityTable {
  int max_weight = 0;
  int nmax = 0;
  std::map<std::vector<HClass>, HVector> entries;

  const HVector* find(const std::vector<HClass>& in) const {
    auto it = entries.find(in);
    return it == entries.end() ? nullptr : &it->second;
  }
};

/// Homology of a weight-truncated dg algebra together with per-family
/// retractions; the workhorse for homotopy transfer.
class TransferModel {
 public:
  TransferModel(DgAlgebra&&, int) = delete;  // the model keeps a pointer to the algebra
  TransferModel(const DgAlgebra& dga, int max_weight)
      : dga_(&dga), max_weight_(max_weight), cx_(truncate_dg(dga, max_weight)) {
    std::vector<const BlockComplex*> order;
    for (const auto& [k, bc] : cx_) order.push_back(&bc);
    std::vector<Retraction> rets(order.size());
    parallel_for(static_cast<int>(order.size()), [&](int i) {
      rets[static_cast<size_t>(i)] = homology_and_retraction(*order[static_cast<size_t>(i)]);
    });
    for (size_t i = 0; i < order.size(); ++i) {
      const BlockComplex* bc = order[i];
      ret_.emplace(BlockComplexKey{bc->src, bc->tgt, bc->w}, std::move(rets[i]));
    }
  }

  const DgAlgebra& dga() const { return *dga_; }
  int max_weight() const { return max_weight_; }
  const std::map<BlockComplexKey, BlockComplex>& complexes() const { return cx_; }
  const std::map<BlockComplexKey, Retraction>& retractions() const { return ret_; }

  const BlockComplex* complex(int src, int tgt, int w) const {
    auto it = cx_.find({src, tgt, w});
    return it == cx_.end() ? nullptr : &it->second;
  }
  const Retraction* retraction(int src, int tgt, int w) const {
    auto it = ret_.find({src, tgt, w});
    return it == ret_.end() ? nullptr : &it->second;
  }

  /// Replace the homology bases: for every block with classes, post-compose
  /// j with an invertible matrix and q with its inverse. Used to probe gauge
  /// independence of transferred structures.
  void regauge(const std::map<BlockKey, QMatrix>& change) {
    for (auto& [key, ret] : ret_) {
      auto [src, tgt, w] = key;
      for (size_t d = 0; d < ret.q.size(); ++d) {
        auto it = change.find(BlockKey{src, tgt, w, static_cast<int>(d)});
        if (it == change.end()) continue;
        const QMatrix& m = it->second;
        if (m.rows() != ret.h_dim(static_cast<int>(d)))
          throw ValidationError("regauge: size mismatch");
        ret.j[d] = ret.j[d] * m;
        ret.q[d] = inverse(m) * ret.q[d];
      }
    }
  }

  int h_dim(const BlockKey& k) const {
    const Retraction* r = retraction(k.src, k.tgt, k.w);
    return r ? r->h_dim(k.d) : 0;
  }

  /// All blocks with nonzero homology, with dimensions.
  std::map<BlockKey, int> h_dims() const {
    std::map<BlockKey, int> out;
    for (const auto& [key, ret] : ret_) {
      auto [src, tgt, w] = key;
      for (size_t d = 0; d < ret.q.size(); ++d)
        if (ret.q[d].rows() > 0) out[BlockKey{src, tgt, w, static_cast<int>(d)}] = ret.q[d].rows();
    }
    return out;
  }

  /// Chain representative of a homology basis class.
  PathVector rep(const HClass& x) const {
    const BlockComplex* bc = complex(x.k.src, x.k.tgt, x.k.w);
    const Retraction* r = retraction(x.k.src, x.k.tgt, x.k.w);
    if (!bc || !r || x.k.d >= static_cast<int>(r->j.size()) || x.idx >= r->h_dim(x.k.d))
      throw ValidationError("rep: no such homology class");
    PathVector out;
    for (int row = 0; row < bc->dim(x.k.d); ++row) {
      const Rat& c = r->j[x.k.d].at(row, x.idx);
      if (c != 0) pv_add(out, bc->basis[x.k.d][row], c);
    }
    return out;
  }

  /// Block and path coordinates of a homogeneous chain; the zero chain maps
  /// to an empty coordinate vector.
  std::pair<BlockKey, std::vector<Rat>> chain_coords(const PathVector& v) const {
    if (v.empty()) return {BlockKey{}, {}};
    BlockKey k = block_of(dga_->hat, v.begin()->first);
    const BlockComplex* bc = complex(k.src, k.tgt, k.w);
    if (!bc) throw InternalInconsistency("chain_coords: unknown block");
    std::map<Path, int> index;
    for (size_t i = 0; i < bc->basis[k.d].size(); ++i) index.emplace(bc->basis[k.d][i], static_cast<int>(i));
    std::vector<Rat> coords(bc->basis[k.d].size());
    for (const auto& [p, c] : v) {
      auto it = index.find(p);
      if (it == index.end()) throw InternalInconsistency("chain_coords: path outside block");
      coords[it->second] = c;
    }
    return {k, coords};
  }

  /// Apply the homotopy to a homogeneous chain.
  PathVector apply_phi(const PathVector& v) const {
    if (v.empty()) return {};
    auto [k, coords] = chain_coords(v);
    const BlockComplex* bc = complex(k.src, k.tgt, k.w);
    const Retraction* r = retraction(k.src, k.tgt, k.w);
    std::vector<Rat> up = r->phi[k.d].apply(coords);
    PathVector out;
    for (size_t i = 0; i < up.size(); ++i)
      if (up[i] != 0) pv_add(out, bc->basis[k.d + 1][i], up[i]);
    return out;
  }

  /// Project a homogeneous chain to homology classes.
  HVector apply_q(const PathVector& v) const {
    if (v.empty()) return {};
    auto [k, coords] = chain_coords(v);
    const Retraction* r = retraction(k.src, k.tgt, k.w);
    std::vector<Rat> h = r->q[k.d].apply(coords);
    HVector out;
    for (size_t i = 0; i < h.size(); ++i)
      if (h[i] != 0) out.emplace(HClass{k, static_cast<int>(i)}, h[i]);
    return out;
  }

  /// nu'_T: at a leaf, the next representative; at a node, phi of the product
  /// of the children with the Koszul sign from moving the right operator past
  /// the left inputs. `inputs` is consumed left to right.
  PathVector eval_nu_prime(const PBRTree& t, const std::vector<HClass>& inputs, size_t& pos) const {
    if (t.is_leaf()) return rep(inputs[pos++]);
    size_t left_start = pos;
    PathVector cl = eval_nu_prime(*t.l, inputs, pos);
    int left_deg = 0;
    for (size_t i = left_start; i < pos; ++i) left_deg += inputs[i].k.d;
    PathVector cr = eval_nu_prime(*t.r, inputs, pos);
    int right_op_deg = t.r->leaves >= 2 ? t.r->leaves - 1 : 0;
    PathVector prod = pv_concat(cl, cr);
    if ((right_op_deg * left_deg) % 2 != 0) prod = pv_scale(prod, Rat(-1));
    return apply_phi(prod);
  }

  /// mu_T = q (product of the children of the root), same sign rule.
  HVector evaluate_mu_T(const PBRTree& t, const std::vector<HClass>& inputs) const {
    if (t.is_leaf() || static_cast<int>(inputs.size()) != t.leaves)
      throw ValidationError("evaluate_mu_T: arity mismatch");
    size_t pos = 0;
    size_t left_start = pos;
    PathVector cl = eval_nu_prime(*t.l, inputs, pos);
    int left_deg = 0;
    for (size_t i = left_start; i < pos; ++i) left_deg += inputs[i].k.d;
    PathVector cr = eval_nu_prime(*t.r, inputs, pos);
    int right_op_deg = t.r->leaves >= 2 ? t.r->leaves - 1 : 0;
    PathVector prod = pv_concat(cl, cr);
    if ((right_op_deg * left_deg) % 2 != 0) prod = pv_scale(prod, Rat(-1));
    return apply_q(prod);
  }

  /// mu_n as a signed sum over all planar binary rooted trees.
  HVector evaluate_mu(const std::vector<HClass>& inputs) const {
    int n = static_cast<int>(inputs.size());
    if (n < 2) throw ValidationError("evaluate_mu: arity must be at least 2");
    for (int i = 0; i + 1 < n; ++i)
      if (inputs[i].k.tgt != inputs[i + 1].k.src)
        return {};
    int w = 0, d = 0;
    for (const HClass& x : inputs) {
      w += x.k.w;
      d += x.k.d;
    }
    if (w > max_weight_)
      throw TruncationOverflow("evaluate_mu: total weight exceeds truncation");
    // The result lives in one block; skip the work when it is trivial.
    BlockKey target{inputs.front().k.src, inputs.back().k.tgt, w, d + n - 2};
    if (h_dim(target) == 0) return {};
    HVector out;
    for (const auto& t : enumerate_pbr(n)) {
      HVector term = evaluate_mu_T(*t, inputs);
      Rat s = tree_sign(*t);
      for (const auto& [c, coeff] : term) {
        auto it = out.find(c);
        if (it == out.end()) {
          if (s * coeff != 0) out.emplace(c, s * coeff);
        } else {
          it->second += s * coeff;
          if (it->second == 0) out.erase(it);
        }
      }
    }
    return out;
  }

 private:
  const DgAlgebra* dga_;
  int max_weight_;
  std::map<BlockComplexKey, BlockComplex> cx_;
  std::map<BlockComplexKey, Retraction> ret_;
};

namespace detail {
/// Enumerate composable tuples of homology basis classes with total weight
/// within budget, invoking fn on each complete tuple.
template <typename Fn>
inline void composable_tuples_rec(const std::map<BlockKey, int>& hdims, int n, int budget,
                                  std::vector<HClass>& acc, const Fn& fn) {
  if (static_cast<int>(acc.size()) == n) {
    fn(acc);
    return;
  }
  for (const auto& [k, dim] : hdims) {
    if (k.w > budget) continue;
    if (!acc.empty() && acc.back().k.tgt != k.src) continue;
    for (int i = 0; i < dim; ++i) {
      acc.push_back(HClass{k, i});
      composable_tuples_rec(hdims, n, budget - k.w, acc, fn);
      acc.pop_back();
    }
  }
}
}  // namespace detail

/// Compute every nonzero mu_n (2 <= n <= nmax) on tuples of homology basis
/// classes with total weight <= the model truncation.
inline AInfinityTable transfer(const TransferModel& model, int nmax) {
  if (nmax < 2) throw ValidationError("transfer: nmax must be at least 2");
  AInfinityTable table;
  table.max_weight = model.max_weight();
  table.nmax = nmax;
  std::map<BlockKey, int> hdims = model.h_dims();
  for (int n = 2; n <= nmax; ++n) {
    std::vector<std::vector<HClass>> tuples;
    std::vector<HClass> acc;
    detail::composable_tuples_rec(hdims, n, model.max_weight(), acc,
                                  [&](const std::vector<HClass>& t) { tuples.push_back(t); });
    std::vector<HVector> results(tuples.size());
    parallel_for(static_cast<int>(tuples.size()), [&](int i) {
      results[static_cast<size_t>(i)] = model.evaluate_mu(tuples[static_cast<size_t>(i)]);
    });
    for (size_t i = 0; i < tuples.size(); ++i)
      if (!results[i].empty()) table.entries.emplace(std::move(tuples[i]), std::move(results[i]));
  }
  return table;
}

/// Evaluate a table entry extended multilinearly over an HVector in one slot.
inline HVector table_mu(const AInfinityTable& table, const std::vector<HClass>& inputs) {
  const HVector* v = table.find(inputs);
  return v ? *v : HVector{};
}

struct AInfFailure {
  int n = 0;
  std::vector<HClass> inputs;
};

/// Check the minimal-model identities
///   0 = sum_{p+q+r=n, q>=2, p+1+r>=2} (-1)^{p+qr} (-1)^{(q-2)(|x_1|+...+|x_p|)}
///         mu_{p+1+r}(x_1,...,x_p, mu_q(x_{p+1},...,x_{p+q}), x_{p+q+1},...,x_n)
/// for 3 <= n <= nmax on all composable basis tuples within the weight budget.
/// Returns the list of violated instances (empty means all identities hold).
inline std::vector<AInfFailure> check_ainf_relations(const AInfinityTable& table,
                                                     const std::map<BlockKey, int>& hdims,
                                                     int nmax) {
  std::vector<AInfFailure> failures;
  for (int n = 3; n <= nmax; ++n) {
    std::vector<std::vector<HClass>> tuples;
    std::vector<HClass> acc;
    detail::composable_tuples_rec(hdims, n, table.max_weight, acc,
                                  [&](const std::vector<HClass>& t) { tuples.push_back(t); });
    std::vector<char> bad(tuples.size(), 0);
    parallel_for(static_cast<int>(tuples.size()), [&](int ti) {
      const std::vector<HClass>& x = tuples[static_cast<size_t>(ti)];
      HVector total;
      for (int q = 2; q <= n - 1; ++q)
        for (int p = 0; p + q <= n; ++p) {
          int r = n - p - q;
          int pre_deg = 0;
          for (int i = 0; i < p; ++i) pre_deg += x[static_cast<size_t>(i)].k.d;
          int sign_exp = p + q * r + (q - 2) * pre_deg;
          Rat sign = (sign_exp % 2 == 0) ? 1 : -1;
          std::vector<HClass> inner(x.begin() + p, x.begin() + p + q);
          HVector innerv = table_mu(table, inner);
          for (const auto& [y, cy] : innerv) {
            std::vector<HClass> outer(x.begin(), x.begin() + p);
            outer.push_back(y);
            outer.insert(outer.end(), x.begin() + p + q, x.end());
            for (const auto& [z, cz] : table_mu(table, outer)) {
              auto it = total.find(z);
              Rat add = sign * cy * cz;
              if (it == total.end()) {
                if (add != 0) total.emplace(z, add);
              } else {
                it->second += add;
                if (it->second == 0) total.erase(it);
              }
            }
          }
        }
      if (!total.empty()) bad[static_cast<size_t>(ti)] = 1;
    });
    for (size_t i = 0; i < tuples.size(); ++i)
      if (bad[i]) failures.push_back(AInfFailure{n, tuples[i]});
  }
  return failures;
}

}  // namespace ginzburg

#endif  // GINZBURG_TRANSFER_HPP
