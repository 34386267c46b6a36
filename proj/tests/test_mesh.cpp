#include <doctest.h>

#include <hardy/error.hpp>
#include <hardy/mesh.hpp>

#include <algorithm>
#include <cmath>

#include "support.hpp"

using namespace hardy;

TEST_CASE("uniform mesh") {
  auto m = build_mesh(Domain::interval(1), 4, 1.0);
  REQUIRE(m.nodes.size() == 5);
  for (int i = 0; i <= 4; ++i) CHECK(m.nodes[i] == doctest::Approx(0.25 * i).epsilon(1e-15));
}

TEST_CASE("graded widths shrink geometrically toward both ends") {
  auto m = build_mesh(Domain::interval(1), 8, 0.5);
  REQUIRE(m.n_elements() == 8);
  std::vector<double> w;
  for (std::size_t i = 0; i + 1 < m.nodes.size(); ++i) w.push_back(m.nodes[i + 1] - m.nodes[i]);
  for (std::size_t i = 1; i + 1 < 4; ++i) CHECK(w[i] / w[i + 1] == doctest::Approx(0.5));
  for (std::size_t i = 4; i + 2 < 8; ++i) CHECK(w[i + 1] / w[i] == doctest::Approx(0.5));
  CHECK(w[0] == doctest::Approx(w[1]));
  CHECK(m.nodes[4] == 0.5);
}

TEST_CASE("bad mesh specs") {
  auto I = Domain::interval(1);
  CHECK_THROWS_AS(build_mesh(I, 3, 0.7), Error);
  CHECK_THROWS_AS(build_mesh(I, 8, 0.1), Error);
  CHECK_THROWS_AS(build_mesh(I, 8, 0.0), Error);
  CHECK_THROWS_AS(build_mesh(I, 8, 1.01), Error);
  CHECK_THROWS_AS(GradedMesh::from_nodes({0.0}), Error);
  CHECK_THROWS_AS(GradedMesh::from_nodes({0.0, 0.5, 0.5, 1.0}), Error);
  CHECK(GradedMesh::from_nodes({0.0, 0.3, 1.0}).n_elements() == 2);
}

TEST_CASE("nested under doubling") {
  test::Gen g(31);
  for (int i = 0; i < 60; ++i) {
    auto d = g.domain();
    std::size_t n = std::size_t(g.pick(std::vector<int>{1, 3, 5, 7})) << g.integer(2, 10);
    double q = g.uniform(0.11, 1.0);
    auto a = build_mesh(d, n, q);
    auto b = build_mesh(d, 2 * n, q);
    CHECK(a.n_elements() == n);
    CHECK(b.n_elements() == 2 * n);
    std::size_t missing = 0;
    for (double x : a.nodes) missing += !std::binary_search(b.nodes.begin(), b.nodes.end(), x);
    INFO(d.kind() << " n=" << n << " q=" << q);
    CHECK(missing == 0);
  }
}

TEST_CASE("smallest element respects the floor") {
  for (double q : {0.11, 0.3, 0.5, 0.7})
    for (std::size_t n : {256u, 4096u, 65536u, 300u, 1000u}) {
      auto d = Domain::interval(2);
      auto m = build_mesh(d, n, q);
      double w = INFINITY;
      for (std::size_t i = 0; i + 1 < m.nodes.size(); ++i) w = std::min(w, m.nodes[i + 1] - m.nodes[i]);
      CHECK(w >= 1e-12 * d.length_scale());
      CHECK(m.n_elements() == n);
    }
}

TEST_CASE("radial meshes") {
  auto B = build_mesh(Domain::ball(3, 2), 64, 0.6);
  CHECK(B.nodes.front() == 0.0);
  CHECK(B.nodes.back() == 2.0);
  CHECK(B.nodes[B.nodes.size() - 1] - B.nodes[B.nodes.size() - 2] < B.nodes[1] - B.nodes[0]);
  auto A = build_mesh(Domain::annulus(2, 1, 2), 64, 0.6);
  CHECK(A.nodes.front() == 1.0);
  CHECK(A.nodes.back() == 2.0);
  CHECK(std::binary_search(A.nodes.begin(), A.nodes.end(), 1.5));
  auto I = build_mesh(Domain::interval(3), 30, 0.8);
  CHECK(std::binary_search(I.nodes.begin(), I.nodes.end(), 1.5));
}

TEST_CASE("construction is deterministic") {
  auto d = Domain::annulus(3, 0.5, 2.5);
  auto a = build_mesh(d, 512, 0.65), b = build_mesh(d, 512, 0.65);
  CHECK(a.nodes == b.nodes);
  CHECK(mesh_hash(a) == mesh_hash(b));
  CHECK(mesh_hash(a).size() == 16);
  CHECK(mesh_hash(a) != mesh_hash(build_mesh(d, 512, 0.66)));
}

TEST_CASE("discrete functions") {
  auto d = Domain::interval(1);
  auto m = test::mesh_ptr(d, 4, 1.0);
  auto u = interpolate(d, m, [](double x) { return 1 + x; });
  CHECK(u.values.front() == 0.0);
  CHECK(u.values.back() == 0.0);
  CHECK(u(0.25) == 1.25);
  CHECK(u(0.375) == doctest::Approx(1.375));
  auto c = constrained_nodes(d, *m);
  CHECK(c == std::vector<bool>{true, false, false, false, true});
  auto bc = constrained_nodes(Domain::ball(2, 1), build_mesh(Domain::ball(2, 1), 8, 0.7));
  CHECK_FALSE(bc.front());
  CHECK(bc.back());
}
