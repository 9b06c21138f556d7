#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "bhflow/curvature.hpp"
#include "bhflow/operators.hpp"
#include "fixtures.hpp"

using namespace bhflow;
using V3 = Eigen::Vector3d;

namespace {

MeshPtr tetrahedron() {
  return make_mesh({V3(0, 0, 0), V3(1, 0, 0), V3(0, 1, 0), V3(0, 0, 1)},
                   {{{0, 2, 1}}, {{0, 1, 3}}, {{1, 2, 3}}, {{0, 3, 2}}});
}

// Two CCW triangles over the unit square's lower-left half plus a quarter
// triangle: areas 0.5 and 0.25, sharing the edge (1,0)-(0,1).
MeshPtr two_triangle_patch() {
  return make_mesh(
      {V3(0, 0, 0), V3(1, 0, 0), V3(0, 1, 0), V3(1, 0.5, 0)},
      {{{0, 1, 2}}, {{1, 3, 2}}});
}

PlanarEmbedding raw_planar(MeshPtr mesh) {
  PlanarEmbedding e;
  e.mesh = mesh;
  e.coords.resize(mesh->vertex_count());
  for (int v = 0; v < mesh->vertex_count(); ++v)
    e.coords[v] = cplx(mesh->vertices[v].x(), mesh->vertices[v].y());
  return e;
}

}  // namespace

TEST_CASE("tetrahedron builds as a closed genus-0 mesh") {
  auto m = tetrahedron();
  CHECK(m->vertex_count() == 4);
  CHECK(m->face_count() == 4);
  CHECK(m->edge_count == 6);
  CHECK(m->is_closed());
  CHECK(m->boundary_loops.empty());
  for (int v = 0; v < 4; ++v) {
    CHECK(m->vertex_faces[v].size() == 3);
    CHECK_FALSE(m->is_boundary(v));
  }
  auto nbrs = m->vertex_neighbors();
  for (int v = 0; v < 4; ++v) CHECK(nbrs[v].size() == 3);
}

TEST_CASE("mesh validation rejects bad input") {
  std::vector<V3> pts{V3(0, 0, 0), V3(1, 0, 0), V3(0, 1, 0), V3(0, 0, 1)};

  SUBCASE("vertex index out of range") {
    CHECK_THROWS_WITH_AS(make_mesh(pts, {{{0, 1, 7}}}),
                         doctest::Contains("out of range"), Error);
  }
  SUBCASE("repeated vertex in a face") {
    CHECK_THROWS_WITH_AS(make_mesh(pts, {{{0, 1, 1}}}),
                         doctest::Contains("repeats"), Error);
  }
  SUBCASE("zero-area face") {
    std::vector<V3> flat{V3(0, 0, 0), V3(1, 0, 0), V3(2, 0, 0), V3(0, 1, 0)};
    CHECK_THROWS_WITH_AS(
        make_mesh(flat, {{{0, 1, 3}}, {{1, 2, 3}}, {{0, 2, 1}}}),
        doctest::Contains("zero area"), Error);
  }
  SUBCASE("inconsistent orientation") {
    try {
      make_mesh(pts, {{{0, 2, 1}}, {{0, 1, 3}}, {{1, 2, 3}}, {{0, 2, 3}}});
      FAIL("expected Topology error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Topology);
    }
  }
  SUBCASE("bowtie vertex") {
    std::vector<V3> bow{V3(0, 0, 0), V3(1, 0, 0),  V3(1, 1, 0),
                        V3(-1, 0, 0), V3(-1, -1, 0)};
    CHECK_THROWS_WITH_AS(make_mesh(bow, {{{0, 1, 2}}, {{0, 3, 4}}}),
                         doctest::Contains("non-manifold"), Error);
  }
  SUBCASE("annulus topology") {
    // Square ring: 4 outer + 4 inner vertices, chi = 0, two loops.
    std::vector<V3> ring;
    for (int i = 0; i < 4; ++i) {
      double a = i * 1.5707963267948966;
      ring.emplace_back(2 * std::cos(a), 2 * std::sin(a), 0);
    }
    for (int i = 0; i < 4; ++i) {
      double a = i * 1.5707963267948966;
      ring.emplace_back(std::cos(a), std::sin(a), 0);
    }
    std::vector<std::array<int, 3>> fs;
    for (int i = 0; i < 4; ++i) {
      int j = (i + 1) % 4;
      fs.push_back({{i, j, 4 + i}});
      fs.push_back({{j, 4 + j, 4 + i}});
    }
    CHECK_THROWS_WITH_AS(make_mesh(ring, fs),
                         doctest::Contains("unsupported topology"), Error);
  }
}

TEST_CASE("polar disk fixture matches its closed forms") {
  for (int rings : {3, 8}) {
    auto m = fixtures::polar_disk_mesh(rings);
    CHECK(m->vertex_count() == 1 + 3 * rings * (rings + 1));
    CHECK(m->face_count() == 6 * rings * rings);
    CHECK(m->boundary_loops.size() == 1);
    CHECK(static_cast<int>(m->boundary_loops[0].size()) == 6 * rings);
  }
}

TEST_CASE("face gradient solves the edge system") {
  SUBCASE("hand-solved single triangle") {
    auto m = make_mesh({V3(0, 0, 0), V3(1, 0, 0), V3(0, 1, 0)}, {{{0, 1, 2}}});
    auto e = raw_planar(m);
    auto g = face_gradient(e, std::vector<double>{0.0, 1.0, 4.0});
    CHECK(g[0].real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g[0].imag() == doctest::Approx(4.0).epsilon(1e-14));
  }
  SUBCASE("constant and affine fields on the disk chart") {
    auto chart = fixtures::polar_disk_chart(6);
    std::vector<double> cst(chart->vertex_count(), 2.75);
    for (cplx g : face_gradient(*chart, cst)) CHECK(std::abs(g) <= 1e-13);

    std::vector<double> lin(chart->vertex_count());
    for (int v = 0; v < chart->vertex_count(); ++v)
      lin[v] = 3.0 * chart->coords[v].real() - 2.0 * chart->coords[v].imag();
    for (cplx g : face_gradient(*chart, lin))
      CHECK(std::abs(g - cplx(3.0, -2.0)) <= 1e-12);
  }
  SUBCASE("collinear face image raises SingularFace") {
    auto m = make_mesh({V3(0, 0, 0), V3(1, 0, 0), V3(0, 1, 0)}, {{{0, 1, 2}}});
    PlanarEmbedding e;
    e.mesh = m;
    e.coords = {cplx(0, 0), cplx(1, 0), cplx(2, 0)};
    try {
      face_gradient(e, std::vector<double>{0.0, 1.0, 4.0});
      FAIL("expected SingularFace");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::SingularFace);
    }
  }
}

TEST_CASE("vertex derivatives average the one-ring") {
  auto chart = fixtures::polar_disk_chart(5);
  const int n = chart->vertex_count();

  SUBCASE("affine exactness at every vertex, boundary included") {
    std::vector<double> lin(n);
    for (int v = 0; v < n; ++v)
      lin[v] = 3.0 * chart->coords[v].real() - 2.0 * chart->coords[v].imag();
    auto d = vertex_derivatives(*chart, lin);
    for (int v = 0; v < n; ++v) CHECK(std::abs(d[v] - cplx(3.0, -2.0)) <= 1e-12);
  }

  SUBCASE("x^2 matches a brute-force one-ring mean") {
    std::vector<double> q(n);
    for (int v = 0; v < n; ++v) {
      double x = chart->coords[v].real();
      q[v] = x * x;
    }
    auto d = vertex_derivatives(*chart, q);
    // Independent oracle: per-face 2x2 solve with unnormalized edge rows.
    const int v = 10;  // interior, ring 2
    cplx acc(0, 0);
    for (int f : chart->mesh->vertex_faces[v]) {
      const auto& t = chart->mesh->faces[f];
      cplx e1 = chart->coords[t[1]] - chart->coords[t[0]];
      cplx e2 = chart->coords[t[2]] - chart->coords[t[0]];
      Eigen::Matrix2d A;
      A << e1.real(), e1.imag(), e2.real(), e2.imag();
      Eigen::Vector2d rhs(q[t[1]] - q[t[0]], q[t[2]] - q[t[0]]);
      Eigen::Vector2d g = A.fullPivLu().solve(rhs);
      acc += cplx(g.x(), g.y());
    }
    acc /= static_cast<double>(chart->mesh->vertex_faces[v].size());
    CHECK(std::abs(d[v] - acc) <= 1e-12);
  }
}

TEST_CASE("vertex areas are one-third lumped face areas") {
  SUBCASE("single triangle of area 1") {
    auto m = make_mesh({V3(0, 0, 0), V3(2, 0, 0), V3(0, 1, 0)}, {{{0, 1, 2}}});
    auto a = vertex_area(raw_planar(m));
    for (double av : a) CHECK(av == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("shared vertex of a 0.5 and a 0.25 triangle") {
    auto a = vertex_area(raw_planar(two_triangle_patch()));
    CHECK(a[1] == doctest::Approx(0.25).epsilon(1e-14));  // (0.5 + 0.25) / 3
    CHECK(a[2] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(a[0] == doctest::Approx(0.5 / 3).epsilon(1e-14));
    CHECK(a[3] == doctest::Approx(0.25 / 3).epsilon(1e-14));
  }
  SUBCASE("areas sum to the embedded area") {
    auto chart = fixtures::polar_disk_chart(8);
    auto a = vertex_area(*chart);
    double sum = 0, total = 0;
    for (double av : a) sum += av;
    for (int f = 0; f < chart->mesh->face_count(); ++f)
      total += chart->face_signed_area(f);
    CHECK(sum == doctest::Approx(total).epsilon(1e-10));
  }
  SUBCASE("sphere chart drops pole-incident faces") {
    auto mesh = fixtures::icosphere_mesh(2);
    auto chart = fixtures::sphere_chart(mesh);
    auto a = vertex_area(*chart);
    CHECK(a[chart->pole_vertex] == 0.0);
    double sum = 0, total = 0;
    for (double av : a) sum += av;
    for (int f = 0; f < chart->mesh->face_count(); ++f)
      if (!chart->skip_face(f)) total += chart->face_signed_area(f);
    CHECK(sum == doctest::Approx(total).epsilon(1e-10));
  }
}

TEST_CASE("discrete curvatures track the analytic surfaces") {
  SUBCASE("unit icosphere, refinement improves both estimates") {
    double prev_h = 0, prev_k = 0;
    for (int s : {3, 4}) {
      auto m = fixtures::icosphere_mesh(s);
      auto c = discrete_curvatures(*m);
      double eh = 0, ek = 0;
      for (int v = 0; v < m->vertex_count(); ++v) {
        eh += std::abs(c.mean[v] - 1.0);
        ek += std::abs(c.gauss[v] - 1.0);
      }
      eh /= m->vertex_count();
      ek /= m->vertex_count();
      if (s == 4) {
        CHECK(eh < 0.05);
        CHECK(ek < 0.05);
        CHECK(eh < prev_h);
        CHECK(ek < prev_k);
      }
      prev_h = eh;
      prev_k = ek;
    }
  }
  SUBCASE("radius scaling: H ~ 1/R, K ~ 1/R^2") {
    auto m = fixtures::icosphere_mesh(3, 2.0);
    auto c = discrete_curvatures(*m);
    double eh = 0, ek = 0;
    for (int v = 0; v < m->vertex_count(); ++v) {
      eh += std::abs(c.mean[v] - 0.5) / 0.5;
      ek += std::abs(c.gauss[v] - 0.25) / 0.25;
    }
    CHECK(eh / m->vertex_count() < 0.05);
    CHECK(ek / m->vertex_count() < 0.05);
  }
  SUBCASE("planar patch is flat") {
    auto m = fixtures::polar_disk_mesh(6);
    auto c = discrete_curvatures(*m);
    for (int v = 0; v < m->vertex_count(); ++v) {
      CHECK(std::abs(c.mean[v]) <= 1e-10);
      CHECK(std::abs(c.gauss[v]) <= 1e-10);
    }
  }
  SUBCASE("open cylinder: H = 1/(2r), K = 0 away from the rim") {
    auto m = fixtures::cylinder_patch_mesh(24, 12);
    auto c = discrete_curvatures(*m);
    double eh = 0, ek = 0;
    int counted = 0;
    for (int v = 0; v < m->vertex_count(); ++v) {
      if (m->is_boundary(v)) continue;
      ++counted;
      eh += std::abs(c.mean[v] - 0.5) / 0.5;
      ek += std::abs(c.gauss[v]);
    }
    REQUIRE(counted > 0);
    CHECK(eh / counted < 0.05);
    CHECK(ek / counted < 0.05);
  }
  SUBCASE("obtuse triangles trip the mixed-area fallback") {
    auto m = fixtures::icosphere_mesh(2);
    CHECK(discrete_curvatures(*m).mixed_area_fallbacks == 0);

    // Squash the flat disk so its triangles go obtuse; counter must move.
    auto flat = fixtures::polar_disk_mesh(4);
    std::vector<V3> squashed = flat->vertices;
    for (auto& p : squashed) p.y() *= 0.15;
    auto c = discrete_curvatures(
        *make_mesh(std::move(squashed),
                   std::vector<std::array<int, 3>>(flat->faces)));
    CHECK(c.mixed_area_fallbacks > 0);
  }
}
