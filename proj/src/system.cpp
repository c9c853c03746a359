#include "waveplate/system.hpp"

#include <random>

#include "waveplate/errors.hpp"

namespace waveplate {

namespace {

VecC complex_of(const VecD& re, const VecD& im) {
  VecC z(re.size());
  z.real() = re;
  z.imag() = im;
  return z;
}

}  // namespace

DofMap build_dofmap(const TriMesh& mesh, const FemSpaces& s) {
  DofMap d;
  d.wave_to_x.resize(s.n_wave());
  d.plate_to_x.resize(s.n_plate());
  int next = 0;
  std::vector<int> vertex_x(mesh.vertices().size(), -1);
  for (int i = 0; i < s.n_wave(); ++i) {
    d.wave_to_x[i] = next;
    vertex_x[s.wave_vertices[i]] = next++;
  }
  for (std::size_t i = 0; i < s.plate_vertices.size(); ++i) {
    int v = s.plate_vertices[i];
    if (vertex_x[v] < 0) vertex_x[v] = next++;
    d.plate_to_x[i] = vertex_x[v];
  }
  for (std::size_t i = 0; i < s.plate_edges.size(); ++i) d.plate_to_x[s.plate_vertices.size() + i] = next++;
  d.layout.n_x = next;
  d.layout.n_eta = static_cast<int>(s.gamma1_vertices.size());
  d.layout.n_xi = static_cast<int>(s.gamma2_edges.size());
  d.layout.n_zeta = static_cast<int>(s.gamma2_vertices.size());
  TripletList<double> pw, pp;
  for (int i = 0; i < s.n_wave(); ++i) pw.add(i, d.wave_to_x[i], 1.0);
  for (int i = 0; i < s.n_plate(); ++i) pp.add(i, d.plate_to_x[i], 1.0);
  d.Pw = pw.build(s.n_wave(), next);
  d.Pp = pp.build(s.n_plate(), next);
  return d;
}

GeneratorSystem::GeneratorSystem(TriMesh mesh, double mu)
    : mesh_(std::move(mesh)), forms_(assemble_forms(mesh_, mu)) {
  dofs_ = build_dofmap(mesh_, forms_.spaces);
  const auto& L = dofs_.layout;
  const auto& f = forms_;
  KX_ = add(congruence(dofs_.Pw, f.K1), congruence(dofs_.Pp, f.K2));
  MX_ = add(congruence(dofs_.Pw, f.M1), congruence(dofs_.Pp, f.M2));
  T1X_ = multiply(f.T1, dofs_.Pw);
  T2nX_ = multiply(f.T2n, dofs_.Pp);
  T2vX_ = multiply(f.T2v, dofs_.Pp);
  const SparseMatrix<double> g1t = multiply(f.G1, T1X_);
  const SparseMatrix<double> g2nt = multiply(f.G2n, T2nX_);
  const SparseMatrix<double> g2vt = multiply(f.G2v, T2vX_);

  const int n = L.size();
  TripletList<double> e, b, m;
  for (int i = 0; i < L.n_x; ++i) e.add(i, i, 1.0);
  e.add_block(MX_, L.p(), L.p());
  e.add_block(f.G1, L.eta(), L.eta());
  e.add_block(f.G2n, L.xi(), L.xi());
  e.add_block(f.G2v, L.zeta(), L.zeta());
  E_ = e.build(n, n);

  for (int i = 0; i < L.n_x; ++i) b.add(L.q() + i, L.p() + i, 1.0);
  b.add_block(KX_, L.p(), L.q(), -1.0);
  b.add_block_transpose(g1t, L.p(), L.eta(), -1.0);
  b.add_block_transpose(g2nt, L.p(), L.xi(), -1.0);
  b.add_block_transpose(g2vt, L.p(), L.zeta(), -1.0);
  b.add_block(g1t, L.eta(), L.p());
  b.add_block(f.G1, L.eta(), L.eta(), -1.0);
  b.add_block(g2nt, L.xi(), L.p());
  b.add_block(f.G2n, L.xi(), L.xi(), -1.0);
  b.add_block(g2vt, L.zeta(), L.p());
  b.add_block(f.G2v, L.zeta(), L.zeta(), -1.0);
  B_ = b.build(n, n);

  m.add_block(KX_, L.q(), L.q());
  m.add_block(MX_, L.p(), L.p());
  m.add_block(f.G1, L.eta(), L.eta());
  m.add_block(f.G2n, L.xi(), L.xi());
  m.add_block(f.G2v, L.zeta(), L.zeta());
  gram_ = m.build(n, n);

  E_lu_ = std::make_unique<Factorization<double>>(E_);
  M_lu_ = std::make_unique<Factorization<double>>(MX_);

  // rigid states: constant displacement, and a plate tilt about the interface
  const FemSpaces& s = f.spaces;
  Dense<double> r = Dense<double>::Zero(L.n_x, 2);
  const Point2 x0 = mesh_.interface_point();
  const Point2 nu = mesh_.interface_normal();
  for (int i = 0; i < s.n_wave(); ++i) r(dofs_.wave_to_x[i], 0) = 1.0;
  int far_plate = -1;
  double far_dist = 0.0;
  for (std::size_t i = 0; i < s.plate_vertices.size(); ++i) {
    int x = dofs_.plate_to_x[i];
    double d = dot(mesh_.vertices()[s.plate_vertices[i]] - x0, nu);
    r(x, 0) = 1.0;
    if (!mesh_.touches(s.plate_vertices[i], Subdomain::Wave)) {
      r(x, 1) = d;
      if (std::abs(d) > far_dist) far_dist = std::abs(d), far_plate = x;
    }
  }
  for (std::size_t i = 0; i < s.plate_edges.size(); ++i) {
    r(dofs_.plate_to_x[s.plate_vertices.size() + i], 1) = dot(nu, s.edge_dof_direction(s.plate_edges[i]));
  }
  rigid_ = Dense<double>::Zero(n, 2);
  rigid_.topRows(L.n_x) = r;

  conserved_ = Dense<double>::Zero(n, 2);
  for (int k = 0; k < 2; ++k) {
    VecD rk = r.col(k);
    VecD t1 = T1X_.apply(rk), t2n = T2nX_.apply(rk), t2v = T2vX_.apply(rk);
    VecD g1 = f.G1.apply(t1), g2n = f.G2n.apply(t2n), g2v = f.G2v.apply(t2v);
    conserved_.col(k).segment(L.q(), L.n_x) =
        T1X_.apply_transpose(g1) + T2nX_.apply_transpose(g2n) + T2vX_.apply_transpose(g2v);
    conserved_.col(k).segment(L.p(), L.n_x) = MX_.apply(rk);
    conserved_.col(k).segment(L.eta(), L.n_eta) = -g1;
    conserved_.col(k).segment(L.xi(), L.n_xi) = -g2n;
    conserved_.col(k).segment(L.zeta(), L.n_zeta) = -g2v;
  }
  Eigen::Matrix2d pairing = conserved_.transpose() * rigid_;
  pairing_inv_ = pairing.inverse();

  // completion: penalise one wave vertex and the plate vertex farthest from
  // the interface, which together detect both rigid states
  double diag = 0.0;
  for (int i = 0; i < L.n_x; ++i) diag = std::max(diag, std::abs(KX_.coeff(i, i)));
  TripletList<double> c;
  c.add_block(gram_, 0, 0);
  c.add(dofs_.wave_to_x[0], dofs_.wave_to_x[0], diag);
  if (far_plate >= 0) c.add(far_plate, far_plate, diag);
  completed_ = c.build(n, n);

  // mean functionals
  mean_rows_ = Eigen::Matrix<double, 4, Eigen::Dynamic>::Zero(4, L.n_x);
  VecD wave_mass = f.M1.apply(VecD::Ones(s.n_wave()));
  for (int i = 0; i < s.n_wave(); ++i) mean_rows_(0, dofs_.wave_to_x[i]) += wave_mass[i];
  auto moments = plate_moment_rows(mesh_, s);
  for (int i = 0; i < s.n_plate(); ++i) mean_rows_.block<3, 1>(1, dofs_.plate_to_x[i]) += moments.col(i);
  mean_dual_.resize(L.n_x, 4);
  for (int k = 0; k < 4; ++k) mean_dual_.col(k) = M_lu_->solve(mean_rows_.row(k).transpose());
  mean_gram_inv_ = (mean_rows_ * mean_dual_).completeOrthogonalDecomposition().pseudoInverse();
}

VecC GeneratorSystem::solve_E(const VecC& r) const {
  return complex_of(E_lu_->solve(r.real()), E_lu_->solve(r.imag()));
}

VecD GeneratorSystem::apply_generator(const VecD& u) const { return solve_E(B_.apply(u)); }

VecC GeneratorSystem::apply_generator(const VecC& u) const { return solve_E(B_.apply_to<cplx>(u)); }

double GeneratorSystem::h_norm_sq(const VecC& u) const {
  return h_norm_sq(VecD(u.real())) + h_norm_sq(VecD(u.imag()));
}

namespace {

template <class V>
double quad(const SparseMatrix<double>& m, const V& x) {
  if constexpr (std::is_same_v<V, VecD>) {
    return x.dot(m.apply(x));
  } else {
    VecD re = x.real(), im = x.imag();
    return re.dot(m.apply(re)) + im.dot(m.apply(im));
  }
}

template <class V>
Energy energy_of(const GeneratorSystem& s, const V& x) {
  const auto& L = s.layout();
  const auto& f = s.forms();
  V q = x.segment(L.q(), L.n_x), p = x.segment(L.p(), L.n_x);
  V qw = s.dofs().Pw.apply_to(q), qp = s.dofs().Pp.apply_to(q);
  V pw = s.dofs().Pw.apply_to(p), pp = s.dofs().Pp.apply_to(p);
  Energy e;
  e.u = 0.5 * quad(f.K1, qw);
  e.v = 0.5 * quad(f.M1, pw);
  e.w = 0.5 * quad(f.K2, qp);
  e.z = 0.5 * quad(f.M2, pp);
  e.eta = 0.5 * quad(f.G1, V(x.segment(L.eta(), L.n_eta)));
  e.xi = 0.5 * quad(f.G2n, V(x.segment(L.xi(), L.n_xi)));
  e.zeta = 0.5 * quad(f.G2v, V(x.segment(L.zeta(), L.n_zeta)));
  return e;
}

template <class V>
Dissipation dissipation_of(const GeneratorSystem& s, const V& x) {
  const auto& L = s.layout();
  const auto& f = s.forms();
  Dissipation d;
  d.eta = quad(f.G1, V(x.segment(L.eta(), L.n_eta)));
  d.xi = quad(f.G2n, V(x.segment(L.xi(), L.n_xi)));
  d.zeta = quad(f.G2v, V(x.segment(L.zeta(), L.n_zeta)));
  return d;
}

}  // namespace

Energy GeneratorSystem::energy(const VecD& u) const { return energy_of(*this, u); }
Energy GeneratorSystem::energy(const VecC& u) const { return energy_of(*this, u); }
Dissipation GeneratorSystem::dissipation(const VecD& u) const { return dissipation_of(*this, u); }
Dissipation GeneratorSystem::dissipation(const VecC& u) const { return dissipation_of(*this, u); }

VecD GeneratorSystem::project_range(const VecD& u) const {
  Eigen::Vector2d c = pairing_inv_ * (conserved_.transpose() * u);
  return u - rigid_ * c;
}

VecC GeneratorSystem::project_range(const VecC& u) const {
  return complex_of(project_range(VecD(u.real())), project_range(VecD(u.imag())));
}

std::array<double, 4> GeneratorSystem::means(const VecD& u) const {
  Eigen::Vector4d m = mean_rows_ * u.segment(layout().q(), layout().n_x);
  return {m(0), m(1), m(2), m(3)};
}

VecD GeneratorSystem::project_means(const VecD& u) const {
  const auto& L = layout();
  if (u.size() != L.size()) throw ArgumentError("state vector has the wrong length");
  VecD out = u;
  for (int off : {L.q(), L.p()}) {
    VecD y = out.segment(off, L.n_x);
    Eigen::Vector4d c = mean_gram_inv_ * (mean_rows_ * y);
    out.segment(off, L.n_x) = y - mean_dual_ * c;
  }
  return out;
}

// ---------------------------------------------------------------- resolvent

ShiftedSolver::ShiftedSolver(const GeneratorSystem& sys, cplx lambda) : sys_(sys), lambda_(lambda) {
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) {
    throw ArgumentError("spectral parameter is not finite");
  }
  const int n = sys.size();
  TripletList<cplx> t;
  deflated_ = std::abs(lambda) < kDeflationRadius;
  if (!deflated_) {
    t.add_block(sys.E(), 0, 0, lambda);
    t.add_block(sys.B(), 0, 0, cplx(-1.0));
  } else {
    // [-B  E R; L^T  0] restricted to range(A_h)
    t.add_block(sys.B(), 0, 0, cplx(-1.0));
    Dense<double> er(n, 2);
    for (int k = 0; k < 2; ++k) er.col(k) = sys.E().apply(VecD(sys.rigid_modes().col(k)));
    for (int k = 0; k < 2; ++k) {
      for (int i = 0; i < n; ++i) {
        t.add(i, n + k, cplx(er(i, k)));
        t.add(n + k, i, cplx(sys.conserved()(i, k)));
      }
    }
  }
  const int dim = deflated_ ? n + 2 : n;
  try {
    lu_ = std::make_unique<Factorization<cplx>>(t.build(dim, dim));
  } catch (const SingularityError& e) {
    throw SpectrumHitError(std::string("lambda is (numerically) an eigenvalue: ") + e.what(), lambda);
  }
}

VecC ShiftedSolver::solve_pencil(const VecC& b) const {
  if (deflated_) throw ArgumentError("pencil solves are unavailable at the deflated zero shift");
  return lu_->solve(b);
}

VecC ShiftedSolver::solve_pencil_adjoint(const VecC& b) const {
  if (deflated_) throw ArgumentError("pencil solves are unavailable at the deflated zero shift");
  return lu_->solve_adjoint(b);
}

VecC ShiftedSolver::solve(const VecC& f) const {
  const int n = sys_.size();
  if (f.size() != n) throw ArgumentError("state vector has the wrong length");
  if (!deflated_) {
    VecC ef = sys_.E().apply_to<cplx>(f);
    return lu_->solve(ef);
  }
  VecC pf = sys_.project_range(f);
  VecC rhs = VecC::Zero(n + 2);
  rhs.head(n) = sys_.E().apply_to<cplx>(pf);
  VecC x = lu_->solve(rhs);
  return x.head(n);
}

VecC resolvent_solve(const GeneratorSystem& sys, cplx lambda, const VecC& f) {
  return ShiftedSolver(sys, lambda).solve(f);
}

SmoothData smooth_initial_data(const GeneratorSystem& sys, const VecD& f) {
  if (f.size() != sys.size()) throw ArgumentError("state vector has the wrong length");
  VecD pf = sys.project_means(f);
  SparseMatrix<double> shifted = add(sys.E(), sys.B(), 1.0, -1.0);
  Factorization<double> lu(shifted);
  VecD epf = sys.E().apply(pf);
  SmoothData out;
  out.u0 = lu.solve(epf);
  VecD au = out.u0 - pf;
  out.da_norm_sq = sys.h_norm_sq(out.u0) + sys.h_norm_sq(au);
  double scale = std::max(epf.norm(), 1e-300);
  out.residual = (shifted.apply(out.u0) - epf).norm() / scale;
  return out;
}

VecD random_state(const GeneratorSystem& sys, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  VecD f(sys.size());
  for (int i = 0; i < f.size(); ++i) f[i] = dist(rng);
  // edge coefficients draw the normal derivative itself
  const FemSpaces& sp = sys.forms().spaces;
  const StateLayout& L = sys.layout();
  const int nv = static_cast<int>(sp.plate_vertices.size());
  for (std::size_t k = 0; k < sp.plate_edges.size(); ++k) {
    int x = sys.dofs().plate_to_x[nv + k];
    double scale = sp.edge_scale[sp.plate_edges[k]];
    f[L.q() + x] *= scale;
    f[L.p() + x] *= scale;
  }
  return f;
}

}  // namespace waveplate
