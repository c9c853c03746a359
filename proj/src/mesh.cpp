#include "waveplate/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "waveplate/errors.hpp"

namespace waveplate {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double signed_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * cross(b - a, c - a);
}

double corner_angle_at(const Point2& p, const Point2& a, const Point2& b) {
  Point2 u = a - p;
  Point2 w = b - p;
  return std::atan2(std::abs(cross(u, w)), dot(u, w));
}

}  // namespace

const char* tag_name(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Gamma1:
      return "gamma1";
    case BoundaryTag::Gamma2:
      return "gamma2";
    case BoundaryTag::Interface:
      return "interface";
  }
  return "?";
}

TriMesh::TriMesh(std::vector<Point2> vertices, std::vector<Triangle> triangles,
                 std::vector<TaggedEdge> tagged_edges)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      tagged_(std::move(tagged_edges)) {
  const int nv = static_cast<int>(vertices_.size());
  for (const auto& p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw MeshError("non-finite vertex coordinate");
  }
  if (triangles_.empty()) throw MeshError("mesh has no triangles");
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    auto& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      if (tri.v[k] < 0 || tri.v[k] >= nv) {
        throw MeshError("triangle " + std::to_string(t) + " references missing vertex " +
                        std::to_string(tri.v[k]));
      }
    }
    if (tri.v[0] == tri.v[1] || tri.v[1] == tri.v[2] || tri.v[0] == tri.v[2]) {
      throw MeshError("triangle " + std::to_string(t) + " repeats a vertex");
    }
    double a = signed_area(vertices_[tri.v[0]], vertices_[tri.v[1]], vertices_[tri.v[2]]);
    if (a < 0) {
      std::swap(tri.v[1], tri.v[2]);
      a = -a;
    }
    double scale = std::max({norm(vertices_[tri.v[1]] - vertices_[tri.v[0]]),
                             norm(vertices_[tri.v[2]] - vertices_[tri.v[0]]), 1e-300});
    if (a <= 1e-14 * scale * scale) throw MeshError("triangle " + std::to_string(t) + " is degenerate");
  }
  build_topology();
  check_tags();
  check_interface();
}

void TriMesh::build_topology() {
  const int nv = static_cast<int>(vertices_.size());
  std::unordered_map<std::uint64_t, int> index;
  index.reserve(triangles_.size() * 2);
  edges_.clear();
  tri_edges_.assign(triangles_.size(), {-1, -1, -1});
  vertex_edges_.assign(nv, {});
  vertex_domains_.assign(nv, 0);
  for (int t = 0; t < static_cast<int>(triangles_.size()); ++t) {
    const auto& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      vertex_domains_[tri.v[k]] |= (tri.domain == Subdomain::Wave ? 1 : 2);
      int a = tri.v[(k + 1) % 3];
      int b = tri.v[(k + 2) % 3];
      auto [it, inserted] = index.try_emplace(edge_key(a, b), static_cast<int>(edges_.size()));
      if (inserted) {
        MeshEdge e;
        e.v = {std::min(a, b), std::max(a, b)};
        e.tri[0] = t;
        e.local[0] = k;
        edges_.push_back(e);
        vertex_edges_[a].push_back(it->second);
        vertex_edges_[b].push_back(it->second);
      } else {
        MeshEdge& e = edges_[it->second];
        if (e.tri[1] >= 0) {
          throw MeshError("edge " + std::to_string(a) + "-" + std::to_string(b) +
                          " is shared by more than two triangles");
        }
        e.tri[1] = t;
        e.local[1] = k;
      }
      tri_edges_[t][k] = it->second;
    }
  }
  h_ = 0.0;
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) h_ = std::max(h_, edge_length(e));
}

void TriMesh::check_tags() {
  const int nv = static_cast<int>(vertices_.size());
  for (std::size_t i = 0; i < tagged_.size(); ++i) {
    const auto& te = tagged_[i];
    if (te.v[0] < 0 || te.v[0] >= nv || te.v[1] < 0 || te.v[1] >= nv) {
      throw MeshError("tagged edge " + std::to_string(i) + " references a missing vertex");
    }
    int e = edge_between(te.v[0], te.v[1]);
    if (e < 0) {
      throw MeshError("tagged edge " + std::to_string(i) + " is not an edge of the triangulation");
    }
    if (edges_[e].tag) throw MeshError("edge " + std::to_string(i) + " is tagged twice");
    edges_[e].tag = te.tag;
  }
  for (const auto& e : edges_) {
    std::string name = std::to_string(e.v[0]) + "-" + std::to_string(e.v[1]);
    Subdomain d0 = triangles_[e.tri[0]].domain;
    if (e.on_boundary()) {
      if (!e.tag) throw MeshError("boundary edge " + name + " is untagged");
      if (*e.tag == BoundaryTag::Interface) {
        throw MeshError("interface edge " + name + " is not shared by both subdomains");
      }
      BoundaryTag want = d0 == Subdomain::Wave ? BoundaryTag::Gamma1 : BoundaryTag::Gamma2;
      if (*e.tag != want) {
        throw MeshError("boundary edge " + name + " tagged " + tag_name(*e.tag) +
                        " but belongs to subdomain " + std::to_string(static_cast<int>(d0)));
      }
    } else {
      Subdomain d1 = triangles_[e.tri[1]].domain;
      if (d0 != d1) {
        if (!e.tag || *e.tag != BoundaryTag::Interface) {
          throw MeshError("edge " + name + " separates the subdomains but is not tagged interface");
        }
      } else if (e.tag) {
        throw MeshError("interior edge " + name + " carries tag " + tag_name(*e.tag));
      }
    }
  }
}

void TriMesh::check_interface() {
  bool wave = false, plate = false;
  for (const auto& t : triangles_) (t.domain == Subdomain::Wave ? wave : plate) = true;
  if (!wave || !plate) throw MeshError("both subdomains must contain triangles");
  std::vector<int> iv = vertices_with_tag(BoundaryTag::Interface);
  if (iv.size() < 2) throw MeshError("mesh has no interface edges");
  int a = iv.front();
  int b = a;
  double best = -1;
  for (int v : iv) {
    double d = norm(vertices_[v] - vertices_[a]);
    if (d > best) best = d, b = v;
  }
  a = b;
  best = -1;
  for (int v : iv) {
    double d = norm(vertices_[v] - vertices_[a]);
    if (d > best) best = d, b = v;
  }
  Point2 dir = (1.0 / best) * (vertices_[b] - vertices_[a]);
  for (int v : iv) {
    double off = std::abs(cross(dir, vertices_[v] - vertices_[a]));
    if (off > 1e-9 * h_) {
      throw MeshError("interface is not straight: vertex " + std::to_string(v) +
                      " lies off the line by " + std::to_string(off));
    }
  }
  iface_point_ = vertices_[a];
  int e = edges_with_tag(BoundaryTag::Interface).front();
  iface_normal_ = boundary_normal(e, Subdomain::Wave);
  Point2 n{dir.y, -dir.x};
  iface_normal_ = dot(n, iface_normal_) >= 0 ? n : -1.0 * n;
}

int TriMesh::edge_between(int a, int b) const {
  if (a < 0 || b < 0 || a >= static_cast<int>(vertex_edges_.size())) return -1;
  int lo = std::min(a, b), hi = std::max(a, b);
  for (int e : vertex_edges_[a]) {
    if (edges_[e].v[0] == lo && edges_[e].v[1] == hi) return e;
  }
  return -1;
}

double TriMesh::edge_length(int e) const {
  return norm(vertices_[edges_[e].v[1]] - vertices_[edges_[e].v[0]]);
}

Point2 TriMesh::edge_midpoint(int e) const {
  return 0.5 * (vertices_[edges_[e].v[0]] + vertices_[edges_[e].v[1]]);
}

Point2 TriMesh::outward_normal(int e, int tri) const {
  const auto& ed = edges_[e];
  int k = ed.tri[0] == tri ? ed.local[0] : ed.local[1];
  Point2 a = vertices_[ed.v[0]];
  Point2 t = vertices_[ed.v[1]] - a;
  Point2 n = (1.0 / norm(t)) * Point2{t.y, -t.x};
  Point2 opp = vertices_[triangles_[tri].v[k]];
  if (dot(n, opp - a) > 0) n = -1.0 * n;
  return n;
}

Point2 TriMesh::boundary_normal(int e, Subdomain side) const {
  const auto& ed = edges_[e];
  for (int s = 0; s < 2; ++s) {
    if (ed.tri[s] >= 0 && triangles_[ed.tri[s]].domain == side) return outward_normal(e, ed.tri[s]);
  }
  throw ArgumentError("edge does not touch the requested subdomain");
}

std::vector<int> TriMesh::edges_with_tag(BoundaryTag tag) const {
  std::vector<int> out;
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    if (edges_[e].tag && *edges_[e].tag == tag) out.push_back(e);
  }
  return out;
}

std::vector<int> TriMesh::vertices_with_tag(BoundaryTag tag) const {
  std::vector<int> out;
  for (int e : edges_with_tag(tag)) {
    out.push_back(edges_[e].v[0]);
    out.push_back(edges_[e].v[1]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> TriMesh::subdomain_vertices(Subdomain d) const {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(vertices_.size()); ++v) {
    if (touches(v, d)) out.push_back(v);
  }
  return out;
}

std::vector<int> TriMesh::subdomain_edges(Subdomain d) const {
  std::vector<int> out;
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    const auto& ed = edges_[e];
    bool hit = triangles_[ed.tri[0]].domain == d ||
               (ed.tri[1] >= 0 && triangles_[ed.tri[1]].domain == d);
    if (hit) out.push_back(e);
  }
  return out;
}

bool TriMesh::touches(int vertex, Subdomain d) const {
  return (vertex_domains_[vertex] & (d == Subdomain::Wave ? 1 : 2)) != 0;
}

double TriMesh::triangle_area(int t) const {
  const auto& v = triangles_[t].v;
  return signed_area(vertices_[v[0]], vertices_[v[1]], vertices_[v[2]]);
}

double TriMesh::subdomain_area(Subdomain d) const {
  double a = 0;
  for (int t = 0; t < static_cast<int>(triangles_.size()); ++t) {
    if (triangles_[t].domain == d) a += triangle_area(t);
  }
  return a;
}

// ---------------------------------------------------------------- text format

namespace {

struct LineReader {
  std::istream& in;
  int line_no = 0;

  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ss(line);
      tokens.clear();
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw MeshError("line " + std::to_string(line_no) + ": " + msg);
  }

  long to_int(const std::string& s) const {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(s, &pos);
    } catch (const std::exception&) {
      fail("expected an integer, got '" + s + "'");
    }
    if (pos != s.size()) fail("expected an integer, got '" + s + "'");
    return v;
  }

  double to_double(const std::string& s) const {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      fail("expected a number, got '" + s + "'");
    }
    if (pos != s.size()) fail("expected a number, got '" + s + "'");
    return v;
  }

  long header(const char* keyword) {
    std::vector<std::string> tok;
    if (!next(tok)) fail(std::string("unexpected end of file, expected '") + keyword + "'");
    if (tok.size() != 2 || tok[0] != keyword) fail(std::string("expected '") + keyword + " <count>'");
    long n = to_int(tok[1]);
    if (n < 0) fail("negative count");
    return n;
  }
};

}  // namespace

TriMesh read_mesh(std::istream& in) {
  LineReader r{in};
  std::vector<std::string> tok;

  long nv = r.header("vertices");
  std::vector<Point2> verts(nv);
  std::vector<char> seen(nv, 0);
  for (long i = 0; i < nv; ++i) {
    if (!r.next(tok)) r.fail("unexpected end of file in vertex block");
    if (tok.size() != 3) r.fail("vertex record needs 'id x y'");
    long id = r.to_int(tok[0]);
    if (id < 0 || id >= nv) r.fail("vertex id " + tok[0] + " out of range");
    if (seen[id]) r.fail("duplicate vertex id " + tok[0]);
    seen[id] = 1;
    verts[id] = {r.to_double(tok[1]), r.to_double(tok[2])};
  }

  long nt = r.header("triangles");
  std::vector<Triangle> tris(nt);
  std::vector<char> tseen(nt, 0);
  for (long i = 0; i < nt; ++i) {
    if (!r.next(tok)) r.fail("unexpected end of file in triangle block");
    if (tok.size() != 5) r.fail("triangle record needs 'id v1 v2 v3 domain'");
    long id = r.to_int(tok[0]);
    if (id < 0 || id >= nt) r.fail("triangle id " + tok[0] + " out of range");
    if (tseen[id]) r.fail("duplicate triangle id " + tok[0]);
    tseen[id] = 1;
    for (int k = 0; k < 3; ++k) {
      long v = r.to_int(tok[1 + k]);
      if (v < 0 || v >= nv) r.fail("triangle references missing vertex " + tok[1 + k]);
      tris[id].v[k] = static_cast<int>(v);
    }
    if (tris[id].v[0] == tris[id].v[1] || tris[id].v[1] == tris[id].v[2] ||
        tris[id].v[0] == tris[id].v[2]) {
      r.fail("triangle " + tok[0] + " repeats a vertex");
    }
    long dom = r.to_int(tok[4]);
    if (dom != 1 && dom != 2) r.fail("domain must be 1 or 2");
    tris[id].domain = dom == 1 ? Subdomain::Wave : Subdomain::Plate;
  }

  long ne = r.header("edges");
  std::vector<TaggedEdge> edges(ne);
  std::vector<char> eseen(ne, 0);
  for (long i = 0; i < ne; ++i) {
    if (!r.next(tok)) r.fail("unexpected end of file in edge block");
    if (tok.size() != 4) r.fail("edge record needs 'id v1 v2 tag'");
    long id = r.to_int(tok[0]);
    if (id < 0 || id >= ne) r.fail("edge id " + tok[0] + " out of range");
    if (eseen[id]) r.fail("duplicate edge id " + tok[0]);
    eseen[id] = 1;
    for (int k = 0; k < 2; ++k) {
      long v = r.to_int(tok[1 + k]);
      if (v < 0 || v >= nv) r.fail("edge references missing vertex " + tok[1 + k]);
      edges[id].v[k] = static_cast<int>(v);
    }
    const std::string& t = tok[3];
    if (t == "gamma1") {
      edges[id].tag = BoundaryTag::Gamma1;
    } else if (t == "gamma2") {
      edges[id].tag = BoundaryTag::Gamma2;
    } else if (t == "interface") {
      edges[id].tag = BoundaryTag::Interface;
    } else {
      r.fail("unknown edge tag '" + t + "'");
    }
  }
  if (r.next(tok)) r.fail("trailing content after edge block");
  return TriMesh(std::move(verts), std::move(tris), std::move(edges));
}

TriMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path);
  try {
    return read_mesh(in);
  } catch (const MeshError& e) {
    throw MeshError(path + ": " + e.what());
  }
}

void write_mesh(const TriMesh& mesh, std::ostream& out) {
  out << std::setprecision(17);
  out << "vertices " << mesh.vertices().size() << "\n";
  for (std::size_t i = 0; i < mesh.vertices().size(); ++i) {
    out << i << " " << mesh.vertices()[i].x << " " << mesh.vertices()[i].y << "\n";
  }
  out << "triangles " << mesh.triangles().size() << "\n";
  for (std::size_t i = 0; i < mesh.triangles().size(); ++i) {
    const auto& t = mesh.triangles()[i];
    out << i << " " << t.v[0] << " " << t.v[1] << " " << t.v[2] << " "
        << static_cast<int>(t.domain) << "\n";
  }
  out << "edges " << mesh.tagged_edges().size() << "\n";
  for (std::size_t i = 0; i < mesh.tagged_edges().size(); ++i) {
    const auto& e = mesh.tagged_edges()[i];
    out << i << " " << e.v[0] << " " << e.v[1] << " " << tag_name(e.tag) << "\n";
  }
}

void save_mesh(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write mesh file " + path);
  write_mesh(mesh, out);
}

// ---------------------------------------------------------------- generators

TriMesh gen_rect_transmission(int n) {
  if (n < 1) throw ArgumentError("rectangle resolution must be at least 1");
  const int nx = 2 * n + 1;
  std::vector<Point2> verts;
  verts.reserve(static_cast<std::size_t>(nx) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i < nx; ++i) verts.push_back({-1.0 + static_cast<double>(i) / n, static_cast<double>(j) / n});
  }
  auto id = [nx](int i, int j) { return j * nx + i; };
  std::vector<Triangle> tris;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < 2 * n; ++i) {
      Subdomain d = i < n ? Subdomain::Wave : Subdomain::Plate;
      tris.push_back({{id(i, j), id(i + 1, j), id(i + 1, j + 1)}, d});
      tris.push_back({{id(i, j), id(i + 1, j + 1), id(i, j + 1)}, d});
    }
  }
  std::vector<TaggedEdge> edges;
  for (int i = 0; i < 2 * n; ++i) {
    BoundaryTag t = i < n ? BoundaryTag::Gamma1 : BoundaryTag::Gamma2;
    edges.push_back({{id(i, 0), id(i + 1, 0)}, t});
    edges.push_back({{id(i, n), id(i + 1, n)}, t});
  }
  for (int j = 0; j < n; ++j) {
    edges.push_back({{id(0, j), id(0, j + 1)}, BoundaryTag::Gamma1});
    edges.push_back({{id(2 * n, j), id(2 * n, j + 1)}, BoundaryTag::Gamma2});
    edges.push_back({{id(n, j), id(n, j + 1)}, BoundaryTag::Interface});
  }
  return TriMesh(std::move(verts), std::move(tris), std::move(edges));
}

TriMesh gen_lens(double alpha1, double alpha2, int n) {
  constexpr double pi = std::numbers::pi;
  if (n < 1) throw ArgumentError("lens resolution must be at least 1");
  for (double a : {alpha1, alpha2}) {
    if (!(a > 0.0 && a < pi)) throw ArgumentError("lens corner angles must lie in (0, pi)");
  }
  const double c = 1.0;
  std::vector<Point2> verts;
  std::vector<Triangle> tris;
  std::vector<TaggedEdge> edges;

  verts.push_back({0.0, 0.0});
  // chord[j] for j in [-n, n]
  std::vector<int> chord(2 * n + 1);
  chord[n] = 0;
  for (int j = 1; j <= n; ++j) {
    chord[n + j] = static_cast<int>(verts.size());
    verts.push_back({0.0, c * j / n});
    chord[n - j] = static_cast<int>(verts.size());
    verts.push_back({0.0, -c * j / n});
  }
  for (int j = 0; j < 2 * n; ++j) edges.push_back({{chord[j], chord[j + 1]}, BoundaryTag::Interface});

  auto build_side = [&](double alpha, double side, Subdomain dom, BoundaryTag tag) {
    // circle through (0, +-c) with its centre on the x-axis
    const double xc = -side * c / std::tan(alpha);
    const double radius = c / std::sin(alpha);
    auto reach = [&](double theta) {
      double dx = std::cos(theta);
      double dc = dx * xc;
      return dc + std::sqrt(dc * dc + radius * radius - xc * xc);
    };
    // start angle: plate sweeps from -pi/2 to pi/2, wave from pi/2 to 3pi/2
    const double theta0 = side > 0 ? -pi / 2 : pi / 2;
    std::vector<int> inner{0};
    for (int j = 1; j <= n; ++j) {
      const int m = 3 * j;
      std::vector<int> outer(m + 1);
      outer[0] = side > 0 ? chord[n - j] : chord[n + j];
      outer[m] = side > 0 ? chord[n + j] : chord[n - j];
      for (int k = 1; k < m; ++k) {
        double theta = theta0 + pi * k / m;
        double rho = static_cast<double>(j) / n * reach(theta);
        outer[k] = static_cast<int>(verts.size());
        verts.push_back({rho * std::cos(theta), rho * std::sin(theta)});
      }
      const int mi = static_cast<int>(inner.size()) - 1;
      int a = 0, b = 0;
      while (a < mi || b < m) {
        bool advance_outer;
        if (b == m) {
          advance_outer = false;
        } else if (a == mi) {
          advance_outer = true;
        } else {
          advance_outer = static_cast<double>(b + 1) / m <= static_cast<double>(a + 1) / mi;
        }
        if (advance_outer) {
          tris.push_back({{inner[a], outer[b], outer[b + 1]}, dom});
          ++b;
        } else {
          tris.push_back({{inner[a], outer[b], inner[a + 1]}, dom});
          ++a;
        }
      }
      if (j == n) {
        for (int k = 0; k < m; ++k) edges.push_back({{outer[k], outer[k + 1]}, tag});
      }
      inner = std::move(outer);
    }
  };
  build_side(alpha1, -1.0, Subdomain::Wave, BoundaryTag::Gamma1);
  build_side(alpha2, 1.0, Subdomain::Plate, BoundaryTag::Gamma2);
  return TriMesh(std::move(verts), std::move(tris), std::move(edges));
}

TriMesh refine_uniform(const TriMesh& mesh) {
  std::vector<Point2> verts = mesh.vertices();
  const int nv = static_cast<int>(verts.size());
  std::vector<int> mid(mesh.edges().size());
  for (std::size_t e = 0; e < mesh.edges().size(); ++e) {
    mid[e] = nv + static_cast<int>(e);
    verts.push_back(mesh.edge_midpoint(static_cast<int>(e)));
  }
  std::vector<Triangle> tris;
  tris.reserve(4 * mesh.triangles().size());
  for (int t = 0; t < static_cast<int>(mesh.triangles().size()); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto& te = mesh.triangle_edges(t);
    // te[k] is opposite vertex k
    int m0 = mid[te[0]], m1 = mid[te[1]], m2 = mid[te[2]];
    tris.push_back({{tri.v[0], m2, m1}, tri.domain});
    tris.push_back({{m2, tri.v[1], m0}, tri.domain});
    tris.push_back({{m1, m0, tri.v[2]}, tri.domain});
    tris.push_back({{m0, m1, m2}, tri.domain});
  }
  std::vector<TaggedEdge> edges;
  for (const auto& te : mesh.tagged_edges()) {
    int m = mid[mesh.edge_between(te.v[0], te.v[1])];
    edges.push_back({{te.v[0], m}, te.tag});
    edges.push_back({{m, te.v[1]}, te.tag});
  }
  return TriMesh(std::move(verts), std::move(tris), std::move(edges));
}

std::vector<CornerAngle> corner_angles(const TriMesh& mesh, Subdomain d, double turn_threshold) {
  const int nv = static_cast<int>(mesh.vertices().size());
  std::vector<double> angle(nv, 0.0);
  std::vector<unsigned char> kinds(nv, 0);  // bit 0: interface edge, bit 1: exterior edge
  const auto& V = mesh.vertices();
  for (int t = 0; t < static_cast<int>(mesh.triangles().size()); ++t) {
    const auto& tri = mesh.triangles()[t];
    if (tri.domain != d) continue;
    for (int k = 0; k < 3; ++k) {
      angle[tri.v[k]] += corner_angle_at(V[tri.v[k]], V[tri.v[(k + 1) % 3]], V[tri.v[(k + 2) % 3]]);
    }
  }
  for (int e : mesh.subdomain_edges(d)) {
    const auto& ed = mesh.edges()[e];
    if (!ed.tag) continue;
    unsigned char bit = *ed.tag == BoundaryTag::Interface ? 1 : 2;
    kinds[ed.v[0]] |= bit;
    kinds[ed.v[1]] |= bit;
  }
  std::vector<CornerAngle> out;
  for (int v = 0; v < nv; ++v) {
    if (!kinds[v]) continue;
    bool junction = kinds[v] == 3;
    if (junction || std::abs(std::numbers::pi - angle[v]) > turn_threshold) {
      out.push_back({v, V[v], angle[v]});
    }
  }
  return out;
}

}  // namespace waveplate
