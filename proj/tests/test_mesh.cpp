#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "ppflow/errors.hpp"
#include "ppflow/mesh.hpp"

using namespace ppflow;

namespace {

std::map<std::pair<int, int>, int> edge_incidence(const TriMesh& m) {
  std::map<std::pair<int, int>, int> inc;
  for (const auto& t : m.triangles())
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      ++inc[{a, b}];
    }
  return inc;
}

void expect_valid(const TriMesh& m) {
  for (int t = 0; t < m.n_triangles(); ++t) EXPECT_GT(m.signed_area(t), 0.0);
  const auto inc = edge_incidence(m);
  for (const auto& [e, n] : inc) EXPECT_TRUE(n == 1 || n == 2);
  for (const auto& be : m.boundary_edges()) {
    auto key = std::minmax(be.v[0], be.v[1]);
    EXPECT_EQ(inc.at({key.first, key.second}), 1);
  }
  double h = 0.0;
  for (const auto& t : m.triangles())
    for (int k = 0; k < 3; ++k) {
      const auto& a = m.vertices()[t[k]];
      const auto& b = m.vertices()[t[(k + 1) % 3]];
      h = std::max(h, std::hypot(a.x - b.x, a.y - b.y));
    }
  EXPECT_DOUBLE_EQ(m.h_max(), h);
}

}  // namespace

TEST(StructuredMesh, SingleCell) {
  const auto m = structured_rect_mesh({0, 1}, {0, 1}, 1, 1);
  EXPECT_EQ(m.n_triangles(), 2);
  EXPECT_EQ(m.n_vertices(), 4);
  EXPECT_NEAR(m.h_max(), std::sqrt(2.0), 1e-15);
  expect_valid(m);
}

TEST(StructuredMesh, ThirtyTwoByThirtyTwo) {
  const auto m = structured_rect_mesh({0, 1}, {0, 1}, 32, 32);
  EXPECT_EQ(m.n_triangles(), 2048);
  expect_valid(m);
}

TEST(StructuredMesh, ChannelArea) {
  const auto m = structured_rect_mesh({0, 40}, {0, 10}, 40, 10);
  double a = 0.0;
  for (int t = 0; t < m.n_triangles(); ++t) a += m.signed_area(t);
  EXPECT_NEAR(a, 400.0, 1e-10);
  expect_valid(m);
}

TEST(StructuredMesh, HalvingCellsHalvesH) {
  const auto a = structured_rect_mesh({0, 1}, {0, 1}, 8, 8);
  const auto b = structured_rect_mesh({0, 1}, {0, 1}, 16, 16);
  EXPECT_DOUBLE_EQ(b.h_max(), a.h_max() / 2);
}

TEST(StructuredMesh, RejectsBadCounts) {
  EXPECT_THROW(structured_rect_mesh({0, 1}, {0, 1}, 0, 3), std::invalid_argument);
  EXPECT_THROW(structured_rect_mesh({0, 1}, {0, 1}, 3, -1), std::invalid_argument);
  EXPECT_THROW(structured_rect_mesh({1, 1}, {0, 1}, 3, 3), std::invalid_argument);
}

TEST(StructuredMesh, TagsFollowSides) {
  SideTags tags{BoundaryTag::wall, BoundaryTag::wall, BoundaryTag::wall, BoundaryTag::lid};
  const auto m = structured_rect_mesh({-1, 1}, {-1, 1}, 6, 6, tags);
  int lid = 0;
  for (const auto& e : m.boundary_edges()) {
    const double y0 = m.vertices()[e.v[0]].y, y1 = m.vertices()[e.v[1]].y;
    if (e.tag == BoundaryTag::lid) {
      ++lid;
      EXPECT_DOUBLE_EQ(y0, 1.0);
      EXPECT_DOUBLE_EQ(y1, 1.0);
    }
  }
  EXPECT_EQ(lid, 6);
  EXPECT_EQ(m.boundary_edges().size(), 24u);
}

TEST(Barycentric, TwoTriangles) {
  const auto m = barycentric_refine(structured_rect_mesh({0, 1}, {0, 1}, 1, 1));
  EXPECT_EQ(m.n_triangles(), 6);
  EXPECT_EQ(m.n_vertices(), 6);
  EXPECT_TRUE(m.is_barycentric());
  expect_valid(m);
}

TEST(Barycentric, PreservesAreaAndTags) {
  const auto base = remove_step(structured_rect_mesh({0, 40}, {0, 10}, 40, 10), Rect{5, 6, 0, 1});
  const auto m = barycentric_refine(base);
  EXPECT_EQ(m.n_triangles(), 3 * base.n_triangles());
  EXPECT_LE(std::abs(m.total_area() - base.total_area()), 1e-12 * base.total_area());
  EXPECT_EQ(m.boundary_edges().size(), base.boundary_edges().size());
  expect_valid(m);
}

TEST(RemoveStep, ChannelStep) {
  const auto m = remove_step(structured_rect_mesh({0, 40}, {0, 10}, 40, 10), Rect{5, 6, 0, 1});
  EXPECT_NEAR(m.total_area(), 399.0, 1e-10);
  expect_valid(m);
  // the two exposed step faces plus its top are walls
  int step_edges = 0;
  for (const auto& e : m.boundary_edges()) {
    const auto& a = m.vertices()[e.v[0]];
    const auto& b = m.vertices()[e.v[1]];
    const double mx = 0.5 * (a.x + b.x), my = 0.5 * (a.y + b.y);
    const bool on_step = (std::abs(mx - 5) < 1e-12 && my < 1) || (std::abs(mx - 6) < 1e-12 && my < 1) ||
                         (std::abs(my - 1) < 1e-12 && mx > 5 && mx < 6);
    if (on_step) {
      ++step_edges;
      EXPECT_EQ(e.tag, BoundaryTag::wall);
    }
  }
  EXPECT_EQ(step_edges, 3);
}

TEST(RemoveStep, EmptyBoxIsIdentity) {
  const auto base = structured_rect_mesh({0, 4}, {0, 2}, 4, 2);
  const auto m = remove_step(base, Rect{1, 1, 0, 1});
  ASSERT_EQ(m.n_vertices(), base.n_vertices());
  ASSERT_EQ(m.n_triangles(), base.n_triangles());
  for (int t = 0; t < m.n_triangles(); ++t) EXPECT_EQ(m.triangles()[t], base.triangles()[t]);
}

TEST(RemoveStep, RejectsDegenerateAndMisalignedBoxes) {
  const auto base = structured_rect_mesh({0, 4}, {0, 2}, 4, 2);
  EXPECT_THROW(remove_step(base, Rect{0, 4, 0, 2}), std::invalid_argument);
  EXPECT_THROW(remove_step(base, Rect{0.5, 1.5, 0, 1}), std::invalid_argument);
}

TEST(Mesh, RejectsClockwiseTriangle) {
  std::vector<Point2> v{{0, 0}, {1, 0}, {0, 1}};
  std::vector<BoundaryEdge> be{{{0, 1}, BoundaryTag::wall}, {{1, 2}, BoundaryTag::wall}, {{2, 0}, BoundaryTag::wall}};
  EXPECT_NO_THROW(TriMesh(v, {{0, 1, 2}}, be));
  EXPECT_THROW(TriMesh(v, {{0, 2, 1}}, be), std::invalid_argument);
}

TEST(Mesh, RejectsUntaggedBoundary) {
  std::vector<Point2> v{{0, 0}, {1, 0}, {0, 1}};
  std::vector<BoundaryEdge> be{{{0, 1}, BoundaryTag::wall}, {{1, 2}, BoundaryTag::wall}};
  EXPECT_THROW(TriMesh(v, {{0, 1, 2}}, be), std::invalid_argument);
}

TEST(PointLocator, FindsContainingTriangle) {
  const auto m = structured_rect_mesh({0, 2}, {0, 1}, 7, 5);
  PointLocator loc(m);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> ux(0, 2), uy(0, 1);
  for (int k = 0; k < 200; ++k) {
    const Point2 p{ux(gen), uy(gen)};
    double xi, eta;
    const int t = loc.locate(p, xi, eta);
    const auto& tri = m.triangles()[t];
    const auto& a = m.vertices()[tri[0]];
    const auto& b = m.vertices()[tri[1]];
    const auto& c = m.vertices()[tri[2]];
    EXPECT_NEAR(a.x + xi * (b.x - a.x) + eta * (c.x - a.x), p.x, 1e-12);
    EXPECT_NEAR(a.y + xi * (b.y - a.y) + eta * (c.y - a.y), p.y, 1e-12);
    EXPECT_GE(xi, -1e-12);
    EXPECT_GE(eta, -1e-12);
    EXPECT_LE(xi + eta, 1 + 1e-12);
  }
  double xi, eta;
  EXPECT_THROW(loc.locate({2.5, 0.5}, xi, eta), LocationError);
}
