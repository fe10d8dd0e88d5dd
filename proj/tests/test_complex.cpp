#include "tropix/complex.hpp"

#include <gtest/gtest.h>

#include "support.hpp"
#include "seeded.hpp"

using namespace tropix;
using namespace tropix::testing_support;

namespace {

std::vector<RatVector> vertex_positions(const TropicalComplex& cx) {
  std::vector<RatVector> out;
  for (auto c : cx.cells_of_dim(0)) out.push_back(cx.cells[c].point);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IntVector> ray_directions(const TropicalComplex& cx) {
  std::vector<IntVector> out;
  for (auto c : cx.cells_of_dim(1))
    if (!cx.cells[c].bounded) out.push_back(cx.cells[c].recession.front());
  std::sort(out.begin(), out.end());
  return out;
}

RatVector rv(std::initializer_list<long long> xs) {
  RatVector out;
  for (auto x : xs) out.emplace_back(x);
  return out;
}

IntVector iv(std::initializer_list<long long> xs) {
  IntVector out;
  for (auto x : xs) out.emplace_back(x);
  return out;
}

}  // namespace

TEST(CornerLocus, PrimitiveComplexInThePlane) {
  auto cx = corner_locus(sigma_lifting(1));
  EXPECT_EQ(vertex_positions(cx), (std::vector<RatVector>{rv({0, 0})}));
  EXPECT_EQ(ray_directions(cx), (std::vector<IntVector>{iv({-1, 0}), iv({0, -1}), iv({1, 1})}));
  for (auto c : cx.cells_of_dim(1)) EXPECT_EQ(*cx.cells[c].weight, 1);
}

TEST(CornerLocus, ShiftedValueTranslatesTheVertex) {
  auto cx = corner_locus(make_lifting({{0, 0}, {1, 0}, {0, 1}}, {0, 3, 0}));
  EXPECT_EQ(vertex_positions(cx), (std::vector<RatVector>{rv({3, 0})}));
  EXPECT_EQ(ray_directions(cx), (std::vector<IntVector>{iv({-1, 0}), iv({0, -1}), iv({1, 1})}));
}

TEST(CornerLocus, SquareWithRaisedCorner) {
  auto cx = corner_locus(make_lifting({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {0, 0, 0, 1}));
  EXPECT_EQ(vertex_positions(cx), (std::vector<RatVector>{rv({0, 0}), rv({1, 1})}));
  std::size_t bounded = 0, rays = 0;
  for (auto c : cx.cells_of_dim(1)) {
    const auto& cell = cx.cells[c];
    if (cell.bounded) {
      ++bounded;
      auto dir = primitive_direction(RatVector{cx.cells[cell.vertices[1]].point[0] - cx.cells[cell.vertices[0]].point[0],
                                               cx.cells[cell.vertices[1]].point[1] - cx.cells[cell.vertices[0]].point[1]});
      EXPECT_TRUE(dir == iv({1, 1}) || dir == iv({-1, -1}));
    } else {
      ++rays;
    }
  }
  EXPECT_EQ(bounded, 1u);
  EXPECT_EQ(rays, 4u);
}

TEST(CornerLocus, CellsSatisfyTheirOwnDescriptions) {
  auto rng = seeded_rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    auto v = random_lifting(rng, 2 + trial % 2, 3, 10);
    auto cx = corner_locus(v);
    for (std::size_t c = 0; c < cx.cells.size(); ++c) {
      EXPECT_TRUE(cx.contains(c, cx.cells[c].point));
      // The relative interior point attains the max exactly on the dual points.
      auto lv = legendre(v, cx.cells[c].point);
      EXPECT_EQ(lv.argmax, cx.cells[c].dual_points);
      EXPECT_EQ(static_cast<int>(cx.ambient_dim) - static_cast<int>(cx.cells[c].equalities.size()), cx.cells[c].dim);
    }
  }
}

TEST(CornerLocus, BoundedCellsAreDualToInteriorFaces) {
  auto v = build_maximal_lifting(1, 3);
  auto cx = corner_locus(v);
  const auto& s = *cx.subdivision;
  for (const auto& c : cx.cells) {
    auto f = *s.face_index(c.dual_points);
    EXPECT_EQ(c.bounded, !s.faces()[f].on_boundary);
    EXPECT_EQ(c.bounded, c.recession.empty());
  }
  // d=3: 9 vertices, 9 interior edges are bounded, 9 boundary edges give rays.
  EXPECT_EQ(cx.cells_of_dim(0).size(), 9u);
  std::size_t bounded = 0;
  for (auto c : cx.cells_of_dim(1)) bounded += cx.cells[c].bounded;
  EXPECT_EQ(bounded, 9u);
  EXPECT_EQ(cx.cells_of_dim(1).size(), 18u);
}

TEST(CheckBalanced, PrimitiveComplexAndTampering) {
  auto cx = corner_locus(sigma_lifting(1));
  EXPECT_TRUE(check_balanced(cx).balanced);
  auto bad = cx;
  bad.cells[bad.cells_of_dim(1).front()].weight = 2;
  auto r = check_balanced(bad);
  EXPECT_FALSE(r.balanced);
  EXPECT_EQ(r.failing_cell, bad.cells_of_dim(0).front());
  auto missing = cx;
  missing.cells[missing.cells_of_dim(1).front()].weight.reset();
  EXPECT_THROW(check_balanced(missing), std::invalid_argument);
}

TEST(CheckBalanced, RandomLiftingsInDimensionsOneToThree) {
  auto rng = seeded_rng(1234);
  for (int trial = 0; trial < 24; ++trial) {
    int dim = 2 + trial % 3;
    auto v = random_lifting(rng, dim, dim == 4 ? 2 : 3, dim == 4 ? 12 : 14);
    auto cx = corner_locus(v);
    auto r = check_balanced(cx);
    EXPECT_TRUE(r.balanced) << "trial " << trial;
  }
}

TEST(CheckBalanced, NonSimplicialCellsBalanceToo) {
  auto pts = lattice_points(dilated_simplex(1, 2));
  std::vector<Rational> vals;
  for (const auto& p : pts) vals.emplace_back(p[0] * p[0] + p[1] * p[1]);
  EXPECT_TRUE(check_balanced(corner_locus(LiftingFunction(pts, vals))).balanced);
  EXPECT_TRUE(check_balanced(corner_locus(make_lifting({{0, 0}, {2, 0}, {0, 2}, {1, 0}}, {0, 0, 0, 5}))).balanced);
}

TEST(RegionGraph, Counts) {
  auto g1 = extract_region_graph(corner_locus(sigma_lifting(1)));
  EXPECT_EQ(g1.region_count, 3u);
  EXPECT_EQ(g1.walls.size(), 3u);
  auto g2 = extract_region_graph(corner_locus(make_lifting({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {0, 0, 0, 1})));
  EXPECT_EQ(g2.region_count, 4u);
  EXPECT_EQ(g2.walls.size(), 5u);
  auto g3 = extract_region_graph(corner_locus(build_maximal_lifting(1, 3)));
  EXPECT_EQ(g3.region_count, 10u);
  TropicalComplex bare;
  EXPECT_THROW(extract_region_graph(bare), std::invalid_argument);
}

TEST(RegionGraph, RegionsMatchSubdivisionVertices) {
  auto rng = seeded_rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    auto v = random_lifting(rng, 2, 4, 12);
    auto cx = corner_locus(v);
    EXPECT_EQ(extract_region_graph(cx).region_count, cx.subdivision->faces_of_dim(0).size());
  }
}

TEST(ReconstructLifting, HandBuiltPrimitiveGraph) {
  RegionGraph g;
  g.region_count = 3;
  g.walls = {{0, 1, Covector{1, 0}, 0}, {0, 2, Covector{0, 1}, 0}, {1, 2, Covector{-1, 1}, 0}};
  auto v = reconstruct_lifting(g);
  EXPECT_EQ(v.points, (std::vector<LatticePoint>{{0, 0}, {1, 0}, {0, 1}}));
  EXPECT_EQ(v.values, (std::vector<Rational>{0, 0, 0}));

  // Walls listed cyclically with covectors e1, e2, -e1-e2.
  RegionGraph cyc;
  cyc.region_count = 3;
  cyc.walls = {{0, 1, Covector{1, 0}, 0}, {1, 2, Covector{0, 1}, 0}, {2, 0, Covector{-1, -1}, 0}};
  auto w = reconstruct_lifting(cyc);
  EXPECT_EQ(w.points, (std::vector<LatticePoint>{{0, 0}, {1, 0}, {1, 1}}));
}

TEST(ReconstructLifting, InconsistentWallsAreRejected) {
  RegionGraph g;
  g.region_count = 2;
  g.walls = {{0, 1, Covector{1, 0}, 0}, {0, 1, Covector{0, 1}, 0}};
  try {
    reconstruct_lifting(g);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "unbalanced or non-realizable region graph");
  }
}

TEST(ReconstructLifting, RoundTripUpToRemarkedAmbiguities) {
  auto rng = seeded_rng(555);
  for (int trial = 0; trial < 20; ++trial) {
    int dim = 2 + trial % 2;
    auto v = random_lifting(rng, dim, 3, 12);
    auto cx = corner_locus(v);
    auto g = extract_region_graph(cx);
    auto w = reconstruct_lifting(g);
    auto cy = corner_locus(w);
    const LatticePoint& shift = g.labels[g.reference];
    EXPECT_EQ(complex_signature(cx, shift), complex_signature(cy, LatticePoint(IntVector(shift.dim(), Integer(0)))));
    // Recovered values equal the convex envelope on the vertices of D_v, up to one constant.
    auto u = underlying_convex(v);
    std::optional<Rational> offset;
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto src = v.index_of(w.points[i] + shift);
      ASSERT_TRUE(src);
      Rational diff = u.values[*src] - w.values[i];
      if (!offset) offset = diff;
      EXPECT_EQ(diff, *offset);
    }
  }
}

TEST(FaceComplex, BottomEdgeOfMaximalTriangle) {
  for (int d = 1; d <= 4; ++d) {
    auto v = build_maximal_lifting(1, d);
    auto fc = face_complex(v, {LatticePoint{0, 0}, LatticePoint{d, 0}});
    EXPECT_EQ(fc.ambient_dim, 1u);
    EXPECT_EQ(fc.cells_of_dim(0).size(), static_cast<std::size_t>(d));
    EXPECT_TRUE(is_unimodular(*fc.subdivision).unimodular);
  }
  auto single = face_complex(sigma_lifting(1), {LatticePoint{1, 0}, LatticePoint{0, 1}});
  EXPECT_EQ(single.cells.size(), 1u);
  EXPECT_THROW(face_complex(sigma_lifting(1), {LatticePoint{1, 0}}), std::invalid_argument);
  EXPECT_THROW(face_complex(sigma_lifting(1), {LatticePoint{0, 0}, LatticePoint{1, 0}, LatticePoint{0, 1}}),
               std::invalid_argument);
}

TEST(FaceComplex, AgreesWithFarSlice) {
  // Oracle: for a point z of a face-complex cell, lift to y with B y = z, push far
  // along a supporting vector u of F, and read off which monomials are maximal.
  auto rng = seeded_rng(21);
  for (int trial = 0; trial < 12; ++trial) {
    int dim = 2 + trial % 2;
    auto v = random_lifting(rng, dim, 3, 12);
    auto s = lower_hull_subdivision(v);
    std::vector<std::vector<std::size_t>> faces;
    for (const auto& hf : s.hull_facets()) {
      std::vector<std::size_t> on;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (pair(hf.normal, v.points[i]) == hf.offset) on.push_back(i);
      faces.push_back(on);
    }
    for (const auto& face : faces) {
      std::vector<LatticePoint> fpts;
      for (auto i : face) fpts.push_back(v.points[i]);
      auto fc = face_complex(v, fpts);
      RatVector u(v.ambient_dim(), Rational(0));
      for (const auto& hf : s.hull_facets()) {
        bool contains = true;
        for (const auto& p : fpts)
          if (pair(hf.normal, p) != hf.offset) contains = false;
        if (contains)
          for (std::size_t j = 0; j < u.size(); ++j) u[j] += hf.normal[j];
      }
      Rational spread = 1;
      for (const auto& c : fc.cells)
        for (const auto& x : c.point) spread = std::max(spread, abs_value(x));
      for (const auto& c : s.cells())
        for (const auto& x : c.slope) spread = std::max(spread, abs_value(x));
      const Rational R = 10 * 2 * spread * 10;
      RatMatrix basis = to_rational(fc.face_frame->basis());
      for (const auto& cell : fc.cells) {
        auto y = solve_linear(basis, cell.point);
        ASSERT_TRUE(y);
        for (std::size_t j = 0; j < u.size(); ++j) (*y)[j] += R * u[j];
        auto argmax = legendre(v, *y).argmax;
        std::vector<std::size_t> expected;
        for (auto i : cell.dual_points) expected.push_back(*v.index_of(fc.face_frame->ambient(fc.source->points[i])));
        std::sort(expected.begin(), expected.end());
        EXPECT_EQ(argmax, expected) << "trial " << trial;
      }
    }
  }
}

TEST(Stratify, TriangleCensus) {
  auto st = stratify(build_maximal_lifting(1, 1));
  auto census = st.label_census();
  EXPECT_EQ(census.size(), 3u);
  EXPECT_EQ((census[{0, 1}]), 1u);
  EXPECT_EQ((census[{1, 1}]), 3u);
  EXPECT_EQ((census[{0, 0}]), 3u);
}

TEST(Stratify, LabelTypesBoundedByTriangularNumber) {
  for (int n = 1; n <= 2; ++n)
    for (int d = 1; d <= 3; ++d) {
      auto types = stratify(build_maximal_lifting(n, d)).label_types();
      EXPECT_LE(types.size(), static_cast<std::size_t>((n + 1) * (n + 2) / 2));
      for (auto [k, l] : types) {
        EXPECT_LE(0, k);
        EXPECT_LE(k, l);
        EXPECT_LE(l, n);
      }
    }
  EXPECT_EQ(stratify(build_maximal_lifting(2, 1)).label_types().size(), 6u);
  EXPECT_EQ(stratify(build_maximal_lifting(1, 2)).label_types().size(), 3u);
}

TEST(Stratify, RejectsNonMaximal) {
  try {
    stratify(make_lifting({{0, 0}, {2, 0}, {0, 1}}, {0, 0, 0}));
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "stratification requires maximal complex");
  }
}

TEST(PhiDelta, Examples) {
  auto tri = dilated_simplex(1, 1);
  auto c = phi_delta({0.0, 0.0}, tri);
  EXPECT_NEAR(c[0], 1.0 / 3, 1e-15);
  EXPECT_NEAR(c[1], 1.0 / 3, 1e-15);
  auto far = phi_delta({50.0, 0.0}, tri);
  EXPECT_NEAR(far[0], 1.0, 1e-10);
  EXPECT_NEAR(far[1], 0.0, 1e-10);
  auto huge = phi_delta({1e6, -3e5}, tri);
  EXPECT_TRUE(std::isfinite(huge[0]) && std::isfinite(huge[1]));
}

TEST(PhiDelta, StaysInsideDelta) {
  auto delta = dilated_simplex(2, 3);
  auto rng = seeded_rng(2);
  std::uniform_real_distribution<double> d(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = phi_delta({d(rng), d(rng), d(rng)}, delta);
    double sum = 0;
    for (double x : p) {
      EXPECT_GT(x, 0.0);
      sum += x;
    }
    EXPECT_LT(sum, 3.0);
  }
}

TEST(VertexEdgeWeights, PrimitiveAndMaximal) {
  auto cx = corner_locus(sigma_lifting(1));
  auto star = vertex_edge_weights(cx, cx.cells_of_dim(0).front());
  EXPECT_EQ(star.weights, (std::vector<Integer>{1, 1, 1}));
  auto mx = corner_locus(build_maximal_lifting(1, 2));
  for (auto b : mx.cells_of_dim(0)) {
    auto st = vertex_edge_weights(mx, b);
    for (const auto& w : st.weights) EXPECT_EQ(w, 1);
  }
  auto m3 = corner_locus(build_maximal_lifting(2, 2));
  for (auto b : m3.cells_of_dim(0)) EXPECT_EQ(vertex_edge_weights(m3, b).weights.size(), 4u);
}

TEST(VertexEdgeWeights, LongEdgeGetsWeightTwo) {
  auto cx = corner_locus(make_lifting({{0, 0}, {2, 0}, {0, 1}}, {0, 0, 0}));
  auto star = vertex_edge_weights(cx, cx.cells_of_dim(0).front());
  // Oracle: dual edges of the triangle with their lattice lengths and inner normals.
  std::map<IntVector, Integer> expected{{iv({0, -1}), 2}, {iv({-1, 0}), 1}, {iv({1, 2}), 1}};
  ASSERT_EQ(star.directions.size(), 3u);
  IntVector sum{0, 0};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(expected.at(star.directions[i]), star.weights[i]);
    sum[0] += star.weights[i] * star.directions[i][0];
    sum[1] += star.weights[i] * star.directions[i][1];
  }
  EXPECT_EQ(sum, iv({0, 0}));
}

TEST(VertexEdgeWeights, NonGenericVertexIsRejected) {
  auto cx = corner_locus(make_lifting({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {0, 0, 0, 0}));
  EXPECT_THROW(vertex_edge_weights(cx, cx.cells_of_dim(0).front()), std::invalid_argument);
}
