#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "waveplate/errors.hpp"
#include "waveplate/mesh.hpp"

using namespace waveplate;

namespace {

constexpr double kPi = std::numbers::pi;

TriMesh parse(const std::string& text) {
  std::istringstream in(text);
  return read_mesh(in);
}

// Wave square [-1,0]x[0,1] glued to the plate strip [0,1]x[0,0.5].
const char* kStepMesh = R"(# step
vertices 7
0 -1 0
1 0 0
2 0 0.5
3 0 1
4 -1 1
5 1 0
6 1 0.5
triangles 5
0 0 1 2 1
1 0 2 3 1
2 0 3 4 1
3 1 5 6 2
4 1 6 2 2
edges 8
0 0 1 gamma1
1 2 3 gamma1
2 3 4 gamma1
3 4 0 gamma1
4 1 2 interface
5 1 5 gamma2
6 5 6 gamma2
7 6 2 gamma2
)";

}  // namespace

TEST_CASE("rectangle generator counts and areas") {
  TriMesh m = gen_rect_transmission(4);
  CHECK(m.vertices().size() == 45);
  CHECK(m.triangles().size() == 64);
  CHECK(m.edges_with_tag(BoundaryTag::Gamma1).size() == 12);
  CHECK(m.edges_with_tag(BoundaryTag::Gamma2).size() == 12);
  CHECK(m.edges_with_tag(BoundaryTag::Interface).size() == 4);
  CHECK(m.subdomain_area(Subdomain::Wave) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.subdomain_area(Subdomain::Plate) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.h() == doctest::Approx(std::sqrt(2.0) / 4));
  CHECK(m.interface_normal().x == doctest::Approx(1.0));
  for (int t = 0; t < static_cast<int>(m.triangles().size()); ++t) CHECK(m.triangle_area(t) > 0);
}

TEST_CASE("save and load round trip") {
  TriMesh m = gen_lens(std::numbers::pi / 2, std::numbers::pi / 3, 3);
  std::stringstream buf;
  write_mesh(m, buf);
  TriMesh r = read_mesh(buf);
  REQUIRE(r.vertices().size() == m.vertices().size());
  REQUIRE(r.triangles().size() == m.triangles().size());
  REQUIRE(r.tagged_edges().size() == m.tagged_edges().size());
  for (std::size_t i = 0; i < m.vertices().size(); ++i) {
    CHECK(r.vertices()[i].x == m.vertices()[i].x);
    CHECK(r.vertices()[i].y == m.vertices()[i].y);
  }
  for (std::size_t i = 0; i < m.triangles().size(); ++i) {
    CHECK(r.triangles()[i].v == m.triangles()[i].v);
    CHECK(r.triangles()[i].domain == m.triangles()[i].domain);
  }
  for (std::size_t i = 0; i < m.tagged_edges().size(); ++i) {
    CHECK(r.tagged_edges()[i].v == m.tagged_edges()[i].v);
    CHECK(r.tagged_edges()[i].tag == m.tagged_edges()[i].tag);
  }
}

TEST_CASE("parser accepts comments and any record order") {
  TriMesh m = parse(kStepMesh);
  CHECK(m.triangles().size() == 5);
  std::string shuffled = kStepMesh;
  auto pos = shuffled.find("0 -1 0\n1 0 0\n");
  shuffled.replace(pos, 13, "1 0 0\n0 -1 0\n");
  CHECK(parse(shuffled).vertices()[0].x == -1.0);
}

TEST_CASE("parser and validator reject malformed meshes") {
  auto bad = [](std::string from, std::string to) {
    std::string text = kStepMesh;
    auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, from.size(), to);
    return text;
  };
  CHECK_THROWS_AS(parse(bad("vertices 7", "verts 7")), MeshError);
  CHECK_THROWS_AS(parse(bad("4 1 6 2 2", "4 1 6 9 2")), MeshError);
  CHECK_THROWS_AS(parse(bad("4 1 6 2 2", "4 1 6 6 2")), MeshError);
  CHECK_THROWS_AS(parse(bad("2 0 3 4 1", "2 0 3 4 3")), MeshError);
  CHECK_THROWS_AS(parse(bad("1 0 0\n", "0 0 0\n")), MeshError);
  CHECK_THROWS_AS(parse(bad("7 6 2 gamma2", "7 6 2 gamma3")), MeshError);
  // untagged boundary edge
  {
    std::string text = bad("edges 8", "edges 7");
    text.erase(text.find("7 6 2 gamma2"));
    CHECK_THROWS_AS(parse(text), MeshError);
  }
  // interface tag on a boundary edge
  CHECK_THROWS_AS(parse(bad("2 3 4 gamma1", "2 3 4 interface")), MeshError);
  // separating edge tagged as exterior boundary
  CHECK_THROWS_AS(parse(bad("4 1 2 interface", "4 1 2 gamma1")), MeshError);
  // wrong exterior tag for the subdomain
  CHECK_THROWS_AS(parse(bad("6 5 6 gamma2", "6 5 6 gamma1")), MeshError);
  CHECK_THROWS_AS(parse("vertices 1\n0 0 0\n"), MeshError);
  CHECK_THROWS_AS(load_mesh("/nonexistent/mesh.txt"), MeshError);
}

TEST_CASE("bent interface is rejected") {
  // two plate triangles meet the wave side along a kinked polyline
  const char* text = R"(vertices 6
0 -1 0
1 0 0
2 0.3 0.5
3 0 1
4 1 0
5 1 1
triangles 4
0 0 1 2 1
1 0 2 3 1
2 1 4 2 2
3 2 4 5 2
edges 0
)";
  CHECK_THROWS_AS(parse(text), MeshError);
}

TEST_CASE("corner angles of the rectangle") {
  TriMesh m = gen_rect_transmission(8);
  auto c = corner_angles(m, Subdomain::Wave);
  REQUIRE(c.size() == 4);
  for (const auto& a : c) CHECK(a.angle == doctest::Approx(kPi / 2).epsilon(1e-14));
  auto p = corner_angles(m, Subdomain::Plate);
  REQUIRE(p.size() == 4);
}

TEST_CASE("collinear junction is reported with angle pi") {
  TriMesh m = parse(kStepMesh);
  auto c = corner_angles(m, Subdomain::Wave);
  bool found = false;
  for (const auto& a : c) {
    if (a.vertex == 2) {
      found = true;
      CHECK(a.angle == doctest::Approx(kPi).epsilon(1e-15));
    }
  }
  CHECK(found);
}

TEST_CASE("lens corner angles converge to the design angles") {
  TriMesh m = gen_lens(kPi / 2, kPi / 3, 32);
  auto p = corner_angles(m, Subdomain::Plate, 0.3);
  REQUIRE(p.size() == 2);
  for (const auto& a : p) CHECK(std::abs(a.angle - kPi / 3) < 2.0 * kPi / 180);
  auto w = corner_angles(m, Subdomain::Wave, 0.3);
  REQUIRE(w.size() == 2);
  for (const auto& a : w) CHECK(std::abs(a.angle - kPi / 2) < 2.0 * kPi / 180);
  // exact segment areas
  double r2 = 1.0 / std::sin(kPi / 3);
  double seg = 0.5 * r2 * r2 * (2 * kPi / 3 - std::sin(2 * kPi / 3));
  CHECK(m.subdomain_area(Subdomain::Plate) == doctest::Approx(seg).epsilon(2e-3));
  CHECK(m.subdomain_area(Subdomain::Wave) == doctest::Approx(kPi / 2).epsilon(2e-3));
}

TEST_CASE("uniform refinement") {
  TriMesh m = gen_lens(2.0, 1.0, 4);
  TriMesh r = refine_uniform(m);
  CHECK(r.triangles().size() == 4 * m.triangles().size());
  CHECK(r.tagged_edges().size() == 2 * m.tagged_edges().size());
  CHECK(r.h() == doctest::Approx(m.h() / 2).epsilon(1e-12));
  CHECK(r.subdomain_area(Subdomain::Wave) ==
        doctest::Approx(m.subdomain_area(Subdomain::Wave)).epsilon(1e-13));
}

TEST_CASE("angles around interior vertices sum to two pi") {
  for (const TriMesh& m : {gen_rect_transmission(5), gen_lens(2.2, 0.9, 6)}) {
    std::vector<double> sum(m.vertices().size(), 0.0);
    const auto& V = m.vertices();
    for (const auto& t : m.triangles()) {
      for (int k = 0; k < 3; ++k) {
        Point2 p = V[t.v[k]], a = V[t.v[(k + 1) % 3]] - p, b = V[t.v[(k + 2) % 3]] - p;
        sum[t.v[k]] += std::atan2(std::abs(cross(a, b)), dot(a, b));
      }
    }
    std::vector<char> boundary(V.size(), 0);
    for (const auto& e : m.edges()) {
      if (e.on_boundary()) boundary[e.v[0]] = boundary[e.v[1]] = 1;
    }
    for (std::size_t v = 0; v < V.size(); ++v) {
      if (!boundary[v]) CHECK(sum[v] == doctest::Approx(2 * kPi).epsilon(1e-12));
    }
  }
}
