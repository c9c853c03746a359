#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <vector>

#include "waveplate/mesh.hpp"
#include "waveplate/sparse.hpp"

namespace waveplate {

// Morley element: quadratic shape functions with vertex values and normal
// derivatives at edge midpoints as degrees of freedom. Local edge k is
// opposite vertex k; its dof is the derivative along normals[k], which need
// not be a unit vector.
class MorleyElement {
 public:
  MorleyElement(const std::array<Point2, 3>& p, const std::array<Point2, 3>& normals);

  std::array<double, 6> values(Point2 x) const;
  std::array<Point2, 6> gradients(Point2 x) const;
  // constant second derivatives (xx, xy, yy) of each shape function
  const std::array<std::array<double, 3>, 6>& hessians() const { return hess_; }
  double area() const { return area_; }
  const std::array<Point2, 3>& points() const { return p_; }

 private:
  std::array<Point2, 3> p_;
  Point2 c_;
  double s_ = 1.0;
  double area_ = 0.0;
  Eigen::Matrix<double, 6, 6> coef_;  // coef_(m, k): monomial m in shape function k
  std::array<std::array<double, 3>, 6> hess_{};
};

// Barycentric gradients of a P1 triangle.
std::array<Point2, 3> p1_gradients(const std::array<Point2, 3>& p);

// Degree-of-freedom numbering of the local finite element spaces.
struct FemSpaces {
  // wave space: P1 on the closure of the wave subdomain
  std::vector<int> wave_vertices;  // local -> mesh vertex
  std::vector<int> wave_index;     // mesh vertex -> local, or -1
  // plate space: Morley; vertex dofs first, then edge dofs
  std::vector<int> plate_vertices;
  std::vector<int> plate_vertex_index;
  std::vector<int> plate_edges;
  std::vector<int> plate_edge_index;  // mesh edge -> plate dof, or -1
  // Orientation of each edge dof: outward from the plate on its boundary,
  // otherwise the right-hand normal of the edge run from lower to higher id.
  std::vector<Point2> edge_normal;
  // An edge dof is the derivative along edge_length * edge_normal, which keeps
  // its basis function on the same scale as the vertex ones.
  std::vector<double> edge_scale;
  Point2 edge_dof_direction(int e) const { return edge_scale[e] * edge_normal[e]; }
  // control spaces
  std::vector<int> gamma1_vertices;
  std::vector<int> gamma2_vertices;
  std::vector<int> gamma2_edges;

  int n_wave() const { return static_cast<int>(wave_vertices.size()); }
  int n_plate() const { return static_cast<int>(plate_vertices.size() + plate_edges.size()); }
  std::array<int, 6> plate_dofs(const TriMesh& mesh, int tri) const;
  MorleyElement plate_element(const TriMesh& mesh, int tri) const;
};

FemSpaces build_spaces(const TriMesh& mesh);

struct FormSet {
  double mu = 0.3;
  FemSpaces spaces;
  SparseMatrix<double> K1, M1;  // wave stiffness and mass
  SparseMatrix<double> K2, M2;  // plate bending form and mass
  SparseMatrix<double> T1;      // wave trace on Gamma1 vertices
  SparseMatrix<double> T2v;     // plate values at Gamma2 vertices
  SparseMatrix<double> T2n;     // plate outward normal derivatives on Gamma2 edges
  SparseMatrix<double> G1, G2v, G2n;
};

FormSet assemble_forms(const TriMesh& mesh, double mu);

// Plate bending density for constant Hessians f = (f11, f12, f22), g likewise.
double bending_density(const std::array<double, 3>& f, const std::array<double, 3>& g, double mu);

using ScalarFn = std::function<double(Point2)>;
using GradientFn = std::function<Point2(Point2)>;

VecD interpolate_p1(const TriMesh& mesh, const FemSpaces& s, const ScalarFn& f);
VecD interpolate_morley(const TriMesh& mesh, const FemSpaces& s, const ScalarFn& f,
                        const GradientFn& grad);

// Integrals of the plate shape functions and their first derivatives:
// rows (int phi, int d1 phi, int d2 phi) against the plate dofs.
Eigen::Matrix<double, 3, Eigen::Dynamic> plate_moment_rows(const TriMesh& mesh, const FemSpaces& s);

// a(v, w) summed element by element from the piecewise Hessians.
double bending_form(const TriMesh& mesh, const FemSpaces& s, const VecD& v, const VecD& w, double mu);

// Errors of a discrete field against an exact solution.
double p1_l2_error(const TriMesh& mesh, const FemSpaces& s, const VecD& u, const ScalarFn& exact);
double morley_l2_error(const TriMesh& mesh, const FemSpaces& s, const VecD& w, const ScalarFn& exact);
// Broken H2 seminorm error; hess returns (xx, xy, yy).
double morley_energy_error(const TriMesh& mesh, const FemSpaces& s, const VecD& w,
                           const std::function<std::array<double, 3>(Point2)>& hess);

}  // namespace waveplate
