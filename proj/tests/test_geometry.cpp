#include <doctest.h>

#include "mfc/geometry.hpp"

using namespace mfc;

TEST_CASE("periodic geometry: counts, wrap, classification") {
  Geometry g = Geometry::periodic(16, 16, 1.0);
  CHECK(g.num_nodes() == 256);
  CHECK(g.scalar_size() == 256 * 17);
  CHECK(g.stacked_size() == 5 * 256 * 16);
  CHECK(g.h() == doctest::Approx(1.0 / 16).epsilon(1e-15));
  CHECK(g.dt() == doctest::Approx(1.0 / 16).epsilon(1e-15));
  // modular indexing: f_{i +- Nh, j} = f_{i,j}
  CHECK(g.node_id(16, 3) == g.node_id(0, 3));
  CHECK(g.node_id(-1, 3) == g.node_id(15, 3));
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i) {
      CHECK(g.classify(i, j) == NodeClass::Interior);
      CHECK(g.channel_mask(g.node_id(i, j)) == 0xFu);
    }
  int s = g.node_id(15, 0);
  CHECK(g.neighbor(s, XPlus) == g.node_id(0, 0));
  CHECK(g.neighbor(s, YMinus) == g.node_id(15, 15));
}

TEST_CASE("box geometry without obstacles: boundary layout") {
  Geometry g = Geometry::box(10, 4, 1.0);
  CHECK(g.num_nodes() == 11 * 11);
  CHECK(g.classify(0, 5) == NodeClass::EdgeLeft);
  CHECK(g.classify(10, 5) == NodeClass::EdgeRight);
  CHECK(g.classify(5, 0) == NodeClass::EdgeBottom);
  CHECK(g.classify(5, 10) == NodeClass::EdgeTop);
  CHECK(g.classify(0, 0) == NodeClass::CornerBottomLeft);
  CHECK(g.classify(10, 0) == NodeClass::CornerBottomRight);
  CHECK(g.classify(0, 10) == NodeClass::CornerTopLeft);
  CHECK(g.classify(10, 10) == NodeClass::CornerTopRight);
  CHECK(g.classify(4, 7) == NodeClass::Interior);
  // corner/edge/interior census for Nh=10: note nodes per side is Nh+1
  int corners = 0, edges = 0, interior = 0;
  for (int j = 0; j <= 10; ++j)
    for (int i = 0; i <= 10; ++i) {
      NodeClass c = g.classify(i, j);
      if (c == NodeClass::Interior)
        ++interior;
      else if (c == NodeClass::EdgeLeft || c == NodeClass::EdgeRight ||
               c == NodeClass::EdgeBottom || c == NodeClass::EdgeTop)
        ++edges;
      else
        ++corners;
    }
  CHECK(corners == 4);
  CHECK(edges == 4 * 9);
  CHECK(interior == 9 * 9);
  // masks: EdgeLeft is missing the -x difference (channel XMinus)
  CHECK(g.channel_mask(g.node_id(0, 5)) == (0xFu & ~(1u << XMinus)));
  CHECK(g.channel_mask(g.node_id(0, 0)) ==
        (0xFu & ~(1u << XMinus) & ~(1u << YMinus)));
}

TEST_CASE("box geometry with obstacle: exclusion and reversed normals") {
  Geometry g = Geometry::box(10, 4, 1.0, {Rect{0.4, 0.6, 0.4, 0.6}});
  // only (5,5) is strictly inside (0.4,0.6)^2 on the h=0.1 grid
  CHECK(g.num_nodes() == 11 * 11 - 1);
  CHECK(g.classify(5, 5) == NodeClass::Excluded);
  CHECK(g.node_id(5, 5) == -1);
  // obstacle faces behave like outer boundaries with reversed normal:
  // left face (i=4, j=5) loses its +x difference -> EdgeRight class
  CHECK(g.classify(4, 5) == NodeClass::EdgeRight);
  CHECK(g.classify(6, 5) == NodeClass::EdgeLeft);
  CHECK(g.classify(5, 4) == NodeClass::EdgeTop);
  CHECK(g.classify(5, 6) == NodeClass::EdgeBottom);
  // obstacle corners remain fully admissible (diagonal-free stencil)
  CHECK(g.classify(4, 4) == NodeClass::Interior);
  // masks agree at both endpoints of every available edge
  for (int s = 0; s < g.num_nodes(); ++s)
    for (int c = 0; c < 4; ++c) {
      int nb = g.neighbor(s, c);
      if (nb < 0) continue;
      int back = c ^ 1;  // XPlus<->XMinus, YPlus<->YMinus
      CHECK(g.neighbor(nb, back) == s);
    }
}

TEST_CASE("geometry validation errors") {
  CHECK_THROWS(Geometry::periodic(1, 4, 1.0));
  CHECK_THROWS(Geometry::periodic(8, 1, 1.0));
  CHECK_THROWS(Geometry::periodic(8, 8, 0.0));
  // misaligned obstacle: 0.35 is not a multiple of h = 0.1
  CHECK_THROWS(Geometry::box(10, 4, 1.0, {Rect{0.35, 0.6, 0.4, 0.6}}));
  // obstacle touching the outer boundary
  CHECK_THROWS(Geometry::box(10, 4, 1.0, {Rect{0.0, 0.6, 0.4, 0.6}}));
  // empty rectangle
  CHECK_THROWS(Geometry::box(10, 4, 1.0, {Rect{0.6, 0.4, 0.4, 0.6}}));
}
