#include <cmath>
#include <numbers>

#include "doctest.h"
#include "waveplate/errors.hpp"
#include "waveplate/spectral.hpp"

using namespace waveplate;

namespace {

const GeneratorSystem& lens4() {
  static GeneratorSystem sys(gen_lens(std::numbers::pi / 2, std::numbers::pi / 3, 4), 0.3);
  return sys;
}

// Dense oracle: largest singular value of the resolvent in the energy norm,
// on the range of the Gram matrix.
double dense_resolvent_norm(const GeneratorSystem& s, double beta) {
  Eigen::MatrixXd E = s.E().to_dense(), B = s.B().to_dense(), G = s.gram().to_dense();
  Eigen::MatrixXcd pencil = cplx(0.0, beta) * E.cast<cplx>() - B.cast<cplx>();
  Eigen::MatrixXcd R = pencil.fullPivLu().solve(E.cast<cplx>());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  const double top = es.eigenvalues().maxCoeff();
  std::vector<int> keep;
  for (int i = 0; i < G.rows(); ++i) {
    if (es.eigenvalues()(i) > 1e-11 * top) keep.push_back(i);
  }
  Eigen::MatrixXd V(G.rows(), keep.size());
  Eigen::VectorXd sq(keep.size());
  for (std::size_t j = 0; j < keep.size(); ++j) {
    V.col(j) = es.eigenvectors().col(keep[j]);
    sq(j) = std::sqrt(es.eigenvalues()(keep[j]));
  }
  Eigen::MatrixXcd C = sq.asDiagonal() * (V.transpose() * R * V) * sq.cwiseInverse().asDiagonal();
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(C).singularValues()(0);
}

}  // namespace

TEST_CASE("eigenpairs of the coercive form") {
  const auto& s = lens4();
  auto pairs = eig_ODeltaR(s, 12);
  REQUIRE(pairs.size() == 12);
  SparseMatrix<double> S = odr_stiffness(s);
  CHECK(S.max_asymmetry() <= 1e-12 * S.norm_inf());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(pairs[i].mu_sq > 0.0);
    if (i) CHECK(pairs[i].mu_sq >= pairs[i - 1].mu_sq);
    CHECK(pairs[i].residual <= 1e-8);
    VecD sx = S.apply(pairs[i].x);
    CHECK((sx - pairs[i].mu_sq * s.MX().apply(pairs[i].x)).norm() <= 1e-8 * sx.norm());
    // L2 x L2 normalization through the separate blocks
    double l2 = pairs[i].phi.dot(s.forms().M1.apply(pairs[i].phi)) +
                pairs[i].psi.dot(s.forms().M2.apply(pairs[i].psi));
    CHECK(l2 == doctest::Approx(1.0).epsilon(1e-10));
    for (std::size_t j = 0; j < i; ++j) {
      CHECK(std::abs(pairs[i].x.dot(s.MX().apply(pairs[j].x))) <= 1e-10);
    }
  }
  // dense oracle for the lowest values
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(S.to_dense(), s.MX().to_dense());
  for (int i = 0; i < 12; ++i) {
    CHECK(pairs[i].mu_sq == doctest::Approx(ges.eigenvalues()(i)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(eig_ODeltaR(s, 0), ArgumentError);
}

TEST_CASE("witness solves the shifted system") {
  const auto& s = lens4();
  auto pairs = eig_ODeltaR(s, 10);
  auto pts = witness(pairs, s);
  REQUIRE(pts.size() == 10);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i].mu == doctest::Approx(std::sqrt(pairs[i].mu_sq)));
    CHECK(pts[i].U_norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(pts[i].U_norm >= 1.0 - 1e-8);
    CHECK(pts[i].residual <= 1e-8 * pts[i].U_norm);
    CHECK(pts[i].pencil_residual <= 1e-10);
    // the pencil form of the same identity
    WitnessState w = witness_state(s, pairs[i]);
    VecC r = cplx(0.0, pts[i].mu) * s.E().apply_to<cplx>(w.U) - s.B().apply_to<cplx>(w.U) -
             s.E().apply_to<cplx>(w.F);
    CHECK(r.norm() <= 1e-8 * w.U.norm());
    CHECK(pts[i].resolved == (pts[i].mu * s.mesh().h() <= 1.0));
  }
}

TEST_CASE("resolvent norm against a dense oracle") {
  const auto& s = lens4();
  REQUIRE(s.size() <= 1500);
  for (double beta : {1.0, 3.7}) {
    double r = resolvent_norm(s, beta);
    CHECK(r == doctest::Approx(dense_resolvent_norm(s, beta)).epsilon(1e-5));
    CHECK(std::abs(r - resolvent_norm(s, -beta)) <= 1e-8 * r);
  }
  CHECK_THROWS_AS(resolvent_norm(s, 0.0), ArgumentError);
}

TEST_CASE("resolvent norm bounds probe pairs and witness ratios") {
  const auto& s = lens4();
  const double beta = 2.3;
  double r = resolvent_norm(s, beta);
  ShiftedSolver solver(s, cplx(0.0, beta));
  for (unsigned seed = 1; seed <= 20; ++seed) {
    VecC f = random_state(s, seed).cast<cplx>();
    VecC u = solver.solve(f);
    CHECK(std::sqrt(s.h_norm_sq(u)) <= r * std::sqrt(s.h_norm_sq(f)) * (1.0 + 1e-6));
  }
  auto pairs = eig_ODeltaR(s, 4);
  for (const auto& p : witness(pairs, s)) {
    CHECK(resolvent_norm(s, p.mu) >= p.U_norm / p.F_norm - 1e-6);
  }
}

TEST_CASE("exponent fit") {
  std::vector<std::pair<double, double>> sq, flat;
  for (double b = 1.0; b <= 40.0; b *= 1.5) {
    sq.push_back({b, 3.0 * b * b});
    flat.push_back({b, 7.0});
  }
  BtFit a = bt_exponent_fit(sq);
  CHECK(a.ell_hat == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(a.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(a.residual <= 1e-12);
  CHECK(std::abs(bt_exponent_fit(flat).ell_hat) <= 1e-12);
  CHECK_THROWS_AS(bt_exponent_fit({{1, 1}, {2, 1}, {30, 1}}), ArgumentError);
  CHECK_THROWS_AS(bt_exponent_fit({{1, 1}, {2, 1}, {3, 1}, {5, 1}}), ArgumentError);
}

TEST_CASE("default sweep spans the resolved range") {
  GeneratorSystem s(gen_lens(std::numbers::pi / 2, std::numbers::pi / 3, 10), 0.3);
  auto pairs = eig_ODeltaR(s, 30);
  double h = s.mesh().h();
  auto sweep = default_sweep(pairs, h, 16);
  REQUIRE(sweep.size() == 16);
  CHECK(sweep.front() == doctest::Approx(pairs[1].mu()));
  CHECK(sweep.back() * h <= 1.0 + 1e-12);
  CHECK(sweep.back() > sweep.front());
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    CHECK(sweep[i] / sweep[i - 1] == doctest::Approx(sweep[1] / sweep[0]));
  }
}
