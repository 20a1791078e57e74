#include <doctest.h>

#include "ginzburg/transfer.hpp"

using namespace ginzburg;

namespace {

Quiver a2() { return parse_quiver("vertex 1\nvertex 2\narrow a: 2 -> 1\n"); }
Quiver a3() {
  return parse_quiver("vertex 1\nvertex 2\nvertex 3\narrow a: 2 -> 1\narrow b: 3 -> 2\n");
}
Quiver kronecker() {
  return parse_quiver("vertex 1\nvertex 2\narrow a: 2 -> 1\narrow b: 2 -> 1\n");
}

}  // namespace

TEST_CASE("planar binary rooted trees are counted by Catalan numbers") {
  CHECK(enumerate_pbr(1).size() == 1);
  CHECK(enumerate_pbr(2).size() == 1);
  CHECK(enumerate_pbr(3).size() == 2);
  CHECK(enumerate_pbr(4).size() == 5);
  CHECK(enumerate_pbr(5).size() == 14);
  CHECK(enumerate_pbr(6).size() == 42);
}

TEST_CASE("tree signs") {
  auto t2 = enumerate_pbr(2);
  CHECK(tree_sign(*t2[0]) == 1);
  // n = 3: first is the right-nested tree (leaf, (leaf, leaf)).
  auto t3 = enumerate_pbr(3);
  CHECK(tree_sign(*t3[0]) == 1);
  CHECK(tree_sign(*t3[1]) == -1);
  auto t4 = enumerate_pbr(4);
  std::vector<int> s4;
  for (const auto& t : t4) s4.push_back(tree_sign(*t));
  CHECK(s4 == std::vector<int>{1, -1, -1, 1, -1});
  int pos5 = 0;
  for (const auto& t : enumerate_pbr(5))
    if (tree_sign(*t) > 0) ++pos5;
  CHECK(pos5 == 7);
}

TEST_CASE("retractions satisfy all side conditions") {
  for (const Quiver& q : {a2(), a3(), kronecker()}) {
    DgAlgebra g = build_ginzburg(q);
    TransferModel model(g, 3);
    for (const auto& [key, bc] : model.complexes())
      CHECK_NOTHROW(verify_retraction(bc, *model.retraction(bc.src, bc.tgt, bc.w)));
  }
}

TEST_CASE("transferred mu_2 is strictly associative on homology") {
  DgAlgebra g = build_ginzburg(a3());
  TransferModel model(g, 3);
  auto hdims = model.h_dims();
  // (x y) z == x (y z) for all composable degree-0 basis triples in budget.
  for (const auto& [kx, dx] : hdims)
    for (const auto& [ky, dy] : hdims)
      for (const auto& [kz, dz] : hdims) {
        if (kx.tgt != ky.src || ky.tgt != kz.src) continue;
        if (kx.w + ky.w + kz.w > 3) continue;
        for (int ix = 0; ix < dx; ++ix)
          for (int iy = 0; iy < dy; ++iy)
            for (int iz = 0; iz < dz; ++iz) {
              HClass x{kx, ix}, y{ky, iy}, z{kz, iz};
              HVector lhs, rhs;
              for (const auto& [m, c] : model.evaluate_mu({x, y}))
                for (const auto& [o, c2] : model.evaluate_mu({m, z})) {
                  lhs[o] += c * c2;
                  if (lhs[o] == 0) lhs.erase(o);
                }
              for (const auto& [m, c] : model.evaluate_mu({y, z}))
                for (const auto& [o, c2] : model.evaluate_mu({x, m})) {
                  rhs[o] += c * c2;
                  if (rhs[o] == 0) rhs.erase(o);
                }
              CHECK(lhs == rhs);
            }
      }
}

TEST_CASE("mu_3 on the smallest Dynkin quiver hits the degree-1 classes") {
  DgAlgebra g = build_ginzburg(a2());
  TransferModel model(g, 4);
  int v1 = g.hat.vertex("1"), v2 = g.hat.vertex("2");
  HClass a{BlockKey{v2, v1, 0, 0}, 0};
  HClass as{BlockKey{v1, v2, 1, 0}, 0};
  // mu_3(a*, a, a*) = +s_2 and mu_3(a, a*, a) = -s_1 for this retraction.
  HVector m1 = model.evaluate_mu({as, a, as});
  REQUIRE(m1.size() == 1);
  CHECK(m1.begin()->first == HClass{BlockKey{v1, v2, 2, 1}, 0});
  CHECK(m1.begin()->second == 1);
  HVector m2 = model.evaluate_mu({a, as, a});
  REQUIRE(m2.size() == 1);
  CHECK(m2.begin()->first == HClass{BlockKey{v2, v1, 1, 1}, 0});
  CHECK(m2.begin()->second == -1);
}

TEST_CASE("mu_3 on A3 is supported exactly on the expected triangles") {
  DgAlgebra g = build_ginzburg(a3());
  TransferModel model(g, 4);
  int v1 = g.hat.vertex("1"), v2 = g.hat.vertex("2"), v3 = g.hat.vertex("3");
  HClass ba{BlockKey{v3, v1, 0, 0}, 0};
  HClass a{BlockKey{v2, v1, 0, 0}, 0};
  HClass as{BlockKey{v1, v2, 1, 0}, 0};
  HClass asbs{BlockKey{v1, v3, 2, 0}, 0};
  HClass b{BlockKey{v3, v2, 0, 0}, 0};
  // Three rotations of one triangle land on the three degree-1 generators.
  HVector r1 = model.evaluate_mu({ba, as, a});
  REQUIRE(r1.size() == 1);
  CHECK(r1.begin()->first.k == BlockKey{v3, v1, 1, 1});
  HVector r2 = model.evaluate_mu({a, asbs, b});
  REQUIRE(r2.size() == 1);
  CHECK(r2.begin()->first.k == BlockKey{v2, v2, 2, 1});
  HVector r3 = model.evaluate_mu({as, a, asbs});
  REQUIRE(r3.size() == 1);
  CHECK(r3.begin()->first.k == BlockKey{v1, v3, 3, 1});
  // A non-triangle triple vanishes: its would-be target block has no homology.
  CHECK(model.evaluate_mu({a, as, a}).empty());
  CHECK(model.h_dim(BlockKey{v2, v1, 1, 1}) == 0);
}

TEST_CASE("structure maps satisfy the minimal A-infinity identities") {
  struct Case {
    Quiver q;
    int wmax, nmax;
  };
  for (const Case& c : {Case{a2(), 4, 5}, Case{a3(), 4, 4}, Case{kronecker(), 3, 4}}) {
    DgAlgebra g = build_ginzburg(c.q);
    TransferModel model(g, c.wmax);
    AInfinityTable t = transfer(model, c.nmax);
    CHECK(check_ainf_relations(t, model.h_dims(), c.nmax).empty());
  }
}

TEST_CASE("no higher products in the non-Dynkin case") {
  DgAlgebra g = build_ginzburg(kronecker());
  TransferModel model(g, 3);
  AInfinityTable t = transfer(model, 5);
  for (const auto& [in, out] : t.entries) CHECK(in.size() == 2);
}

TEST_CASE("higher products transform multilinearly under a change of homology basis") {
  DgAlgebra g = build_ginzburg(a3());
  TransferModel model(g, 4);
  AInfinityTable before = transfer(model, 3);
  // Rescale every class by 1/2, 1, 3/2, ... cyclically.
  std::map<BlockKey, QMatrix> change;
  std::map<BlockKey, Rat> lambda;
  int c = 0;
  for (const auto& [k, dim] : model.h_dims()) {
    Rat l = Rat(2 + (c++ % 3), 2);
    l.canonicalize();  // mpq_class(int, int) stores the raw fraction
    QMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = l;
    change[k] = m;
    lambda[k] = l;
  }
  model.regauge(change);
  for (const auto& [key, bc] : model.complexes())
    CHECK_NOTHROW(verify_retraction(bc, *model.retraction(bc.src, bc.tgt, bc.w)));
  AInfinityTable after = transfer(model, 3);
  REQUIRE(after.entries.size() == before.entries.size());
  CHECK(check_ainf_relations(after, model.h_dims(), 3).empty());
  for (const auto& [in, out] : before.entries) {
    const HVector* out2 = after.find(in);
    REQUIRE(out2 != nullptr);
    Rat f = 1;
    for (const HClass& x : in) f *= lambda.at(x.k);
    for (const auto& [y, coeff] : out) {
      auto it = out2->find(y);
      REQUIRE(it != out2->end());
      CHECK(it->second * lambda.at(y.k) == coeff * f);
    }
  }
}
