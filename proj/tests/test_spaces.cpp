#include <doctest.h>

#include "helpers.hpp"
#include "table1.hpp"

using namespace ddr;

TEST_CASE("per-element counts match the published table") {
  const SpaceKind spaces[3] = {SpaceKind::V, SpaceKind::Sigma, SpaceKind::W};
  for (int shape = 0; shape < 4; ++shape) {
    const Mesh m = build_regular_polygon(shape + 3);
    CHECK(count_non_aligned_edges(m, 0) == shape + 3);
    for (int s = 0; s < 3; ++s) {
      for (int k = 0; k <= 4; ++k) {
        const auto [full, ser] = local_dof_counts(m, k, spaces[s]);
        CAPTURE(shape);
        CAPTURE(s);
        CAPTURE(k);
        CHECK(full == table1::counts[shape][s][k].full);
        CHECK(ser == table1::counts[shape][s][k].serendipity);
      }
    }
  }
}

TEST_CASE("layout examples") {
  const Mesh tri = build_regular_polygon(3);
  const Mesh quad = build_regular_polygon(4);
  CHECK(space_layout(tri, 0, SpaceKind::Sigma).dim == 6);
  CHECK(space_layout(tri, 1, SpaceKind::Sigma, Variant::serendipity).dim == 14);
  CHECK(space_layout(quad, 2, SpaceKind::V).dim == 15);
}

TEST_CASE("serendipity degree") {
  for (int k = 0; k <= 6; ++k) {
    CHECK(serendipity_degree(k, 3) == std::max(k - 2, -1));
    CHECK(serendipity_degree(k, 6) == std::max(k - 5, -1));
  }
}

TEST_CASE("aligned edges count once") {
  // A square with one side split in two: five edges, four supporting lines.
  const Mesh m = Mesh::from_polygons({Point(0, 0), Point(0.5, 0), Point(1, 0), Point(1, 1), Point(0, 1)}, {{0, 1, 2, 3, 4}});
  CHECK(count_non_aligned_edges(m, 0) == 4);
  // Every cell of the clipped hexagonal family has no aligned pair.
  const Mesh h = build_structured_mesh(MeshFamily::hexagonal, 4);
  for (int t = 0; t < h.n_elements(); ++t) {
    CHECK(count_non_aligned_edges(h, t) == static_cast<int>(h.element(t).edges.size()));
  }
}

TEST_CASE("global dimension identity and layout order") {
  for (const Mesh& m : testing::structured_meshes(3)) {
    for (int k = 0; k <= 3; ++k) {
      const SpaceLayout s = space_layout(m, k, SpaceKind::Sigma);
      const int per_element = (dim_poly2(k) - 1) + dim_poly2(k - 1);
      CHECK(s.dim == m.n_elements() * per_element + m.n_edges() * (2 * k + 1) + m.n_vertices());
      CHECK(s.element_offset[0] == 0);
      CHECK(s.edge_offset[0] == m.n_elements() * per_element);
      CHECK(s.vertex_offset[0] == s.edge_offset[0] + m.n_edges() * (2 * k + 1));
      const SpaceLayout v = space_layout(m, k, SpaceKind::V);
      CHECK(v.dim == m.n_elements() * dim_poly2(k - 1) + m.n_edges() * k + m.n_vertices());
      const SpaceLayout w = space_layout(m, k, SpaceKind::W);
      CHECK(w.dim == m.n_elements() * dim_poly2(k) + m.n_edges() * k + m.n_vertices());
    }
  }
}

TEST_CASE("homogeneous layouts drop boundary blocks") {
  const Mesh m = build_structured_mesh(MeshFamily::cartesian, 3);
  const int nbe = 12, nbv = 12;
  for (int k = 0; k <= 2; ++k) {
    for (auto space : {SpaceKind::V, SpaceKind::Sigma, SpaceKind::W}) {
      const SpaceLayout full = space_layout(m, k, space);
      const SpaceLayout zero = space_layout(m, k, space, Variant::full, BoundaryCondition::homogeneous);
      CHECK(zero.dim == full.dim - nbe * full.edge_size - nbv);
      const auto map = embedding(zero, full);
      CHECK(static_cast<int>(map.size()) == zero.dim);
      for (std::size_t i = 1; i < map.size(); ++i) CHECK(map[i] > map[i - 1]);
      const auto dofs = local_dofs(zero, m, 0);
      CHECK(static_cast<int>(dofs.size()) == full.local_dim(m, 0));
    }
  }
}

TEST_CASE("interpolator examples") {
  const Mesh m = build_structured_mesh(MeshFamily::hexagonal, 2);
  for (int k = 0; k <= 2; ++k) {
    const SpaceBases sb(m, k);
    const SpaceLayout lv = space_layout(m, k, SpaceKind::V);
    const DofVector one = interpolate_V(sb, lv, [](const Point&) { return 1.0; });
    for (int v = 0; v < m.n_vertices(); ++v) CHECK(one.values[lv.vertex_offset[v]] == 1.0);
    if (k > 0) {
      for (int t = 0; t < m.n_elements(); ++t) {
        // Projection of 1 on the orthonormal frame: only the constant member is active.
        const double c0 = sb.element(t).poly_k1.polys.coeffs(0, 0);
        CHECK(one.values[lv.element_offset[t]] == doctest::Approx(std::sqrt(m.element(t).area)).epsilon(1e-12));
        CHECK(std::abs(c0 * std::sqrt(m.element(t).area) - 1.0) < 1e-12);
        for (int i = 1; i < lv.element_size[t]; ++i) CHECK(std::abs(one.values[lv.element_offset[t] + i]) < 1e-12);
      }
    }

    const SpaceLayout ls = space_layout(m, k, SpaceKind::Sigma);
    const testing::Poly2 xy{{{1, 1, 1.0}}};
    const DofVector g = interpolate_Sigma(sb, ls, testing::gradient_field(xy));
    for (int e = 0; e < m.n_edges(); ++e) {
      for (int j = 0; j < k; ++j) CHECK(g.values[ls.edge_offset[e] + k + 1 + j] == 0.0);
    }
    for (int v = 0; v < m.n_vertices(); ++v) CHECK(g.values[ls.vertex_offset[v]] == 0.0);

    const SpaceLayout lw = space_layout(m, k, SpaceKind::W);
    const DofVector x1 = interpolate_W(sb, lw, [](const Point& x) { return x.x(); });
    for (int v = 0; v < m.n_vertices(); ++v) CHECK(x1.values[lw.vertex_offset[v]] == m.vertex(v).x.x());
  }
}

TEST_CASE("interpolation with boundary conditions") {
  const Mesh m = build_structured_mesh(MeshFamily::cartesian, 3);
  const SpaceBases sb(m, 1);
  const SpaceLayout lv0 = space_layout(m, 1, SpaceKind::V, Variant::full, BoundaryCondition::homogeneous);
  const DofVector p = interpolate_V(sb, lv0, testing::exact_p);
  CHECK(p.values.size() == lv0.dim);
  CHECK_THROWS_AS(interpolate_V(sb, space_layout(m, 1, SpaceKind::V, Variant::serendipity), testing::exact_p),
                  std::invalid_argument);
}
