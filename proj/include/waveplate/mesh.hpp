#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace waveplate {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

enum class Subdomain { Wave = 1, Plate = 2 };
enum class BoundaryTag { Gamma1, Gamma2, Interface };

const char* tag_name(BoundaryTag tag);

struct Triangle {
  std::array<int, 3> v{};
  Subdomain domain = Subdomain::Wave;
};

struct TaggedEdge {
  std::array<int, 2> v{};
  BoundaryTag tag = BoundaryTag::Gamma1;
};

// Unique mesh edge with its adjacent triangles. Local edge k of a triangle is
// the edge opposite its vertex k.
struct MeshEdge {
  std::array<int, 2> v{};  // v[0] < v[1]
  std::array<int, 2> tri{-1, -1};
  std::array<int, 2> local{-1, -1};
  std::optional<BoundaryTag> tag;

  bool on_boundary() const { return tri[1] < 0; }
};

class TriMesh {
 public:
  TriMesh() = default;
  TriMesh(std::vector<Point2> vertices, std::vector<Triangle> triangles,
          std::vector<TaggedEdge> tagged_edges);

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<TaggedEdge>& tagged_edges() const { return tagged_; }
  const std::vector<MeshEdge>& edges() const { return edges_; }
  const std::array<int, 3>& triangle_edges(int t) const { return tri_edges_[t]; }

  int edge_between(int a, int b) const;  // -1 when absent
  double edge_length(int e) const;
  Point2 edge_midpoint(int e) const;
  // Unit normal of edge e pointing out of the given adjacent triangle.
  Point2 outward_normal(int e, int tri) const;
  // Unit normal pointing out of the subdomain; e must lie on its boundary.
  Point2 boundary_normal(int e, Subdomain side) const;

  std::vector<int> edges_with_tag(BoundaryTag tag) const;
  std::vector<int> vertices_with_tag(BoundaryTag tag) const;
  std::vector<int> subdomain_vertices(Subdomain d) const;
  std::vector<int> subdomain_edges(Subdomain d) const;
  bool touches(int vertex, Subdomain d) const;

  double h() const { return h_; }
  double triangle_area(int t) const;
  double subdomain_area(Subdomain d) const;

  // Interface line: a point on it and the unit normal pointing from the wave
  // side into the plate side.
  Point2 interface_point() const { return iface_point_; }
  Point2 interface_normal() const { return iface_normal_; }

 private:
  void build_topology();
  void check_tags();
  void check_interface();

  std::vector<Point2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<TaggedEdge> tagged_;
  std::vector<MeshEdge> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<std::vector<int>> vertex_edges_;
  std::vector<unsigned char> vertex_domains_;
  double h_ = 0.0;
  Point2 iface_point_;
  Point2 iface_normal_;
};

TriMesh load_mesh(const std::string& path);
TriMesh read_mesh(std::istream& in);
void save_mesh(const TriMesh& mesh, const std::string& path);
void write_mesh(const TriMesh& mesh, std::ostream& out);

TriMesh gen_rect_transmission(int n);
// Two circular segments glued along the chord x = 0, |y| <= 1. alpha1 and
// alpha2 are the corner angles (radians) at the chord ends on the wave and
// plate sides; n is the number of radial layers.
TriMesh gen_lens(double alpha1, double alpha2, int n);
TriMesh refine_uniform(const TriMesh& mesh);

struct CornerAngle {
  int vertex = -1;
  Point2 position;
  double angle = 0.0;  // interior angle in radians, in (0, 2*pi)
};

// Boundary corners of one subdomain: vertices where the boundary turns by more
// than turn_threshold radians, plus every vertex where the boundary passes
// between the interface and the exterior part.
std::vector<CornerAngle> corner_angles(const TriMesh& mesh, Subdomain d,
                                       double turn_threshold = 1e-6);

}  // namespace waveplate
