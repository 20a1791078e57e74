#include <doctest.h>

#include "ginzburg/ar_mesh.hpp"
#include "ginzburg/transfer.hpp"

using namespace ginzburg;

namespace {

Quiver a2() { return parse_quiver("vertex 1\nvertex 2\narrow a: 2 -> 1\n"); }
Quiver a3() {
  return parse_quiver("vertex 1\nvertex 2\nvertex 3\narrow a: 2 -> 1\narrow b: 3 -> 2\n");
}
Quiver d4() {
  return parse_quiver(
      "vertex 0\nvertex 1\nvertex 2\nvertex 3\n"
      "arrow a: 1 -> 0\narrow b: 2 -> 0\narrow c: 3 -> 0\n");
}

}  // namespace

TEST_CASE("projective dimension vectors count paths") {
  Quiver q = a3();
  auto p = projective_dims(q);
  CHECK(p[q.vertex("1")] == std::vector<long>{1, 0, 0});
  CHECK(p[q.vertex("2")] == std::vector<long>{1, 1, 0});
  CHECK(p[q.vertex("3")] == std::vector<long>{1, 1, 1});
}

TEST_CASE("knitting the smallest example by hand") {
  Quiver q = a2();
  KnitResult k = knit(q, 2);
  int v1 = q.vertex("1"), v2 = q.vertex("2");
  CHECK(k.dims[0][v1] == std::vector<long>{1, 0});
  CHECK(k.dims[0][v2] == std::vector<long>{1, 1});
  CHECK(k.dims[1][v1] == std::vector<long>{0, 1});   // the other simple
  CHECK(k.dims[1][v2] == std::vector<long>{-1, 0});  // first shift event
  CHECK(k.dims[2][v1] == std::vector<long>{-1, -1});
}

TEST_CASE("Nakayama permutation and shift positions") {
  Quiver q2 = a2();
  NakayamaData n2 = nakayama_and_N(q2);
  CHECK(n2.nu == std::vector<int>{q2.vertex("2"), q2.vertex("1")});
  CHECK(n2.N == std::vector<int>{1, 2});
  Quiver q3 = a3();
  NakayamaData n3 = nakayama_and_N(q3);
  CHECK(n3.nu == std::vector<int>{q3.vertex("3"), q3.vertex("2"), q3.vertex("1")});
  CHECK(n3.N == std::vector<int>{1, 2, 3});
  Quiver q4 = d4();
  NakayamaData n4 = nakayama_and_N(q4);
  CHECK(n4.nu == std::vector<int>{0, 1, 2, 3});
  CHECK(n4.N == std::vector<int>{3, 3, 3, 3});
  CHECK_THROWS_AS(nakayama_and_N(parse_quiver("vertex 1\nvertex 2\narrow a: 2 -> 1\narrow b: 2 -> 1\n")),
                  ValidationError);
}

TEST_CASE("fragment shape") {
  Quiver q = a2();
  MeshFragment f = build_fragment(q, 2, false);
  CHECK(f.fragment.num_vertices() == 6);
  // One a per arrow and slice (3 slices), one b per arrow and slice below the top.
  CHECK(f.fragment.num_arrows() == 3 + 2);
  const Arrow& a0 = f.fragment.arrow(f.fragment.arrow_index("a[a]@0"));
  CHECK(a0.src == f.vertex({q.vertex("1"), 0}));
  CHECK(a0.tgt == f.vertex({q.vertex("2"), 0}));
  CHECK(a0.weight == 0);
  const Arrow& b0 = f.fragment.arrow(f.fragment.arrow_index("b[a]@0"));
  CHECK(b0.src == f.vertex({q.vertex("2"), 0}));
  CHECK(b0.tgt == f.vertex({q.vertex("1"), 1}));
  CHECK(b0.weight == 1);
  MeshFragment fu = build_fragment(q, 3, true);
  const Arrow& u0 = fu.fragment.arrow(fu.fragment.arrow_index("u[1]@0"));
  CHECK(u0.src == fu.vertex({q.vertex("1"), 0}));
  CHECK(u0.tgt == fu.vertex({q.vertex("2"), 1}));  // nu(1) = 2, N(1) = 1
  CHECK(u0.weight == 1);
  CHECK(u0.degree == 1);
}

TEST_CASE("mesh relators mirror the preprojective relators one slice up") {
  Quiver q = a2();
  MeshFragment f = build_fragment(q, 2, false);
  int v1 = q.vertex("1"), v2 = q.vertex("2");
  // At (1, 1): only the incoming arrow a contributes, with a minus sign.
  PathVector r1 = mesh_relator(f, v1, 1);
  REQUIRE(r1.size() == 1);
  CHECK(r1.begin()->second == -1);
  CHECK(r1.begin()->first ==
        Path{f.vertex({v1, 0}), f.vertex({v1, 1}),
             {f.fragment.arrow_index("a[a]@0"), f.fragment.arrow_index("b[a]@0")}});
  // At (2, 1): only the outgoing arrow, with a plus sign.
  PathVector r2 = mesh_relator(f, v2, 1);
  REQUIRE(r2.size() == 1);
  CHECK(r2.begin()->second == 1);
  CHECK(r2.begin()->first ==
        Path{f.vertex({v2, 0}), f.vertex({v2, 1}),
             {f.fragment.arrow_index("b[a]@0"), f.fragment.arrow_index("a[a]@1")}});
}

TEST_CASE("mesh homs reproduce the knitted dimension vectors") {
  for (const Quiver& q : {a3(), d4()}) {
    NakayamaData nd = nakayama_and_N(q);
    int S = 0;
    for (int v : nd.N) S = std::max(S, v);
    KnitResult k = knit(q, S);
    MeshFragment f = build_fragment(q, S, false);
    GradedQuotientAlgebra alg = mesh_quotient(f);
    // Orbit i carries modules strictly below its shift slice M_i.
    std::vector<int> Mi(q.num_vertices(), S + 1);
    for (int j = 0; j < q.num_vertices(); ++j) Mi[nd.nu[j]] = std::min(Mi[nd.nu[j]], nd.N[j]);
    for (int i = 0; i < q.num_vertices(); ++i)
      for (int m = 0; m <= S; ++m)
        for (int j = 0; j < q.num_vertices(); ++j) {
          int h = mesh_hom(f, alg, {j, 0}, {i, m});
          if (m < Mi[i]) {
            CHECK(h == k.dims[m][i][j]);
          } else if (m == Mi[i]) {
            // Maps from a projective to a shifted module vanish without u.
            CHECK(h == 0);
          }
        }
  }
}

TEST_CASE("u-extended mesh homs match the homology of the dg algebra") {
  for (const Quiver& q : {a2(), a3()}) {
    const int wmax = 4;
    DgAlgebra g = build_ginzburg(q);
    TransferModel model(g, wmax);
    MeshFragment f = build_fragment(q, wmax, true);
    GradedQuotientAlgebra alg = mesh_quotient(f);
    std::map<BlockKey, int> ud;
    for (int i = 0; i < q.num_vertices(); ++i)
      for (int j = 0; j < q.num_vertices(); ++j)
        for (int w = 0; w <= wmax; ++w)
          for (int d = 0; d <= w; ++d) {
            int dim = alg.block_dim(BlockKey{f.vertex({j, 0}), f.vertex({i, w}), w, d});
            if (dim) ud[BlockKey{i, j, w, d}] = dim;
          }
    CHECK(ud == model.h_dims());
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(knit(a2(), -1), ValidationError);
  CHECK_THROWS_AS(knit(parse_quiver("vertex 1\narrow t: 1 -> 1\n"), 2), ValidationError);
  CHECK_THROWS_AS(build_fragment(a2(), -1, false), ValidationError);
  MeshFragment f = build_fragment(a2(), 2, false);
  CHECK_THROWS_AS(mesh_relator(f, 0, 0), ValidationError);
  CHECK_THROWS_AS(mesh_relator(f, 0, 3), ValidationError);
}
