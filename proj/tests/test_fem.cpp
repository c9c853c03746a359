#include <cmath>

#include "doctest.h"
#include "model_problems.hpp"
#include "waveplate/errors.hpp"
#include "waveplate/fem.hpp"

using namespace waveplate;

TEST_CASE("P1 stiffness of the reference triangle") {
  auto g = p1_gradients({Point2{0, 0}, Point2{1, 0}, Point2{0, 1}});
  double expect[3][3] = {{1, -0.5, -0.5}, {-0.5, 0.5, 0}, {-0.5, 0, 0.5}};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) CHECK(0.5 * dot(g[a], g[b]) == doctest::Approx(expect[a][b]));
}

TEST_CASE("Morley shape functions are dual to the dofs") {
  std::array<Point2, 3> p{Point2{0.1, -0.2}, Point2{1.3, 0.1}, Point2{0.4, 0.9}};
  std::array<Point2, 3> n;
  for (int k = 0; k < 3; ++k) {
    Point2 t = p[(k + 2) % 3] - p[(k + 1) % 3];
    n[k] = (1.0 / norm(t)) * Point2{t.y, -t.x};
  }
  n[1] = -1.0 * n[1];
  MorleyElement el(p, n);
  for (int l = 0; l < 3; ++l) {
    auto v = el.values(p[l]);
    for (int k = 0; k < 6; ++k) CHECK(v[k] == doctest::Approx(k == l ? 1.0 : 0.0).epsilon(1e-12));
  }
  for (int e = 0; e < 3; ++e) {
    Point2 m = 0.5 * (p[(e + 1) % 3] + p[(e + 2) % 3]);
    auto g = el.gradients(m);
    for (int k = 0; k < 6; ++k) {
      CHECK(std::abs(dot(g[k], n[e]) - (k == 3 + e ? 1.0 : 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("forms reproduce exact integrals of quadratics") {
  TriMesh mesh = gen_rect_transmission(4);
  const double mu = 0.3;
  FormSet f = assemble_forms(mesh, mu);
  const FemSpaces& s = f.spaces;
  auto quad = [&](auto fn, auto grad) { return interpolate_morley(mesh, s, fn, grad); };
  VecD x2 = quad([](Point2 p) { return p.x * p.x; }, [](Point2 p) { return Point2{2 * p.x, 0}; });
  VecD xy = quad([](Point2 p) { return p.x * p.y; }, [](Point2 p) { return Point2{p.y, p.x}; });
  VecD y2 = quad([](Point2 p) { return p.y * p.y; }, [](Point2 p) { return Point2{0, 2 * p.y}; });
  VecD one = quad([](Point2) { return 1.0; }, [](Point2) { return Point2{0, 0}; });
  VecD aff = quad([](Point2 p) { return 2 + p.x - 3 * p.y; }, [](Point2) { return Point2{1, -3}; });
  CHECK(x2.dot(f.K2.apply(x2)) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(xy.dot(f.K2.apply(xy)) == doctest::Approx(2 * (1 - mu)).epsilon(1e-12));
  CHECK(x2.dot(f.K2.apply(y2)) == doctest::Approx(4 * mu).epsilon(1e-12));
  CHECK(f.K2.apply(aff).norm() < 1e-12 * f.K2.norm_inf());
  CHECK(one.dot(f.M2.apply(one)) == doctest::Approx(1.0).epsilon(1e-13));
  // int x^2 y^2 over [0,1]^2 = 1/9
  CHECK(x2.dot(f.M2.apply(y2)) == doctest::Approx(1.0 / 9).epsilon(1e-13));

  VecD u1 = VecD::Ones(s.n_wave());
  CHECK(u1.dot(f.M1.apply(u1)) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(f.K1.apply(u1).norm() < 1e-13);
  VecD ux = interpolate_p1(mesh, s, [](Point2 p) { return 3 * p.x - p.y; });
  CHECK(ux.dot(f.K1.apply(ux)) == doctest::Approx(10.0).epsilon(1e-12));

  VecD g1 = VecD::Ones(f.G1.rows());
  CHECK(g1.dot(f.G1.apply(g1)) == doctest::Approx(3.0).epsilon(1e-13));
  VecD g2 = VecD::Ones(f.G2v.rows());
  CHECK(g2.dot(f.G2v.apply(g2)) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(f.G2n.to_dense().trace() == doctest::Approx(3.0).epsilon(1e-13));
  // outward normal derivative of x^2 on x = 1 is 2, of y^2 on y = 1 is 2 and on y = 0 is 0
  VecD dn = f.T2n.apply(x2);
  for (int i = 0; i < dn.size(); ++i) {
    Point2 m = mesh.edge_midpoint(s.gamma2_edges[i]);
    double expect = std::abs(m.x - 1.0) < 1e-12 ? 2.0 : 0.0;
    CHECK(dn[i] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("assembled matrices are symmetric with the right definiteness") {
  TriMesh mesh = gen_lens(2.0, 1.1, 5);
  FormSet f = assemble_forms(mesh, 0.25);
  for (const auto* m : {&f.K1, &f.M1, &f.K2, &f.M2, &f.G1, &f.G2v, &f.G2n}) CHECK(m->max_asymmetry() < 1e-14);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> k2(f.K2.to_dense());
  double top = k2.eigenvalues().maxCoeff();
  int zero = 0;
  for (int i = 0; i < k2.eigenvalues().size(); ++i) {
    CHECK(k2.eigenvalues()(i) > -1e-12 * top);
    if (k2.eigenvalues()(i) < 1e-10 * top) ++zero;
  }
  CHECK(zero == 3);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> m2(f.M2.to_dense());
  CHECK(m2.eigenvalues().minCoeff() > 0);
}

TEST_CASE("element-wise bending form agrees with the assembled matrix") {
  TriMesh mesh = gen_lens(2.0, 1.1, 5);
  FormSet f = assemble_forms(mesh, 0.25);
  VecD v = VecD::LinSpaced(f.spaces.n_plate(), -1.0, 2.0).array().sin();
  VecD w = VecD::LinSpaced(f.spaces.n_plate(), 0.5, 3.0).array().cos();
  CHECK(bending_form(mesh, f.spaces, v, w, 0.25) == doctest::Approx(v.dot(f.K2.apply(w))).epsilon(1e-12));
  VecD aff = interpolate_morley(
      mesh, f.spaces, [](Point2 p) { return 4 - p.x + 2 * p.y; }, [](Point2) { return Point2{-1, 2}; });
  CHECK(std::abs(bending_form(mesh, f.spaces, aff, aff, 0.25)) <= 1e-20);
  CHECK_THROWS_AS(bending_form(mesh, f.spaces, v, VecD::Zero(3), 0.25), ArgumentError);
}

TEST_CASE("Poisson ratio outside [0, 1/2) is rejected") {
  TriMesh mesh = gen_rect_transmission(2);
  CHECK_THROWS_AS(assemble_forms(mesh, 0.5), ArgumentError);
  CHECK_THROWS_AS(assemble_forms(mesh, -0.1), ArgumentError);
}

TEST_CASE("model problems converge on coarse meshes") {
  auto p4 = model::poisson(4), p8 = model::poisson(8);
  CHECK(model::rate(p4.l2, p8.l2, p4.h, p8.h) > 1.8);
  auto c4 = model::clamped_plate(4), c8 = model::clamped_plate(8);
  CHECK(model::rate(c4.energy, c8.energy, c4.h, c8.h) > 0.8);
  CHECK(c8.l2 < c4.l2);
}
