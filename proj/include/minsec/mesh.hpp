#pragma once

#include <Eigen/Core>

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace minsec {

/// Raised for malformed input geometry; the message names the offending element.
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  int v0 = -1;
  int v1 = -1;
  /// Incident faces; face[1] == -1 on the boundary.
  std::array<int, 2> face{-1, -1};
  /// Corner of face[i] opposite this edge.
  std::array<int, 2> opposite_corner{-1, -1};
  bool boundary() const { return face[1] < 0; }
};

/// A boundary edge traversed with the interior on its left.
struct BoundaryEdge {
  int edge = -1;
  int face = -1;
  int from = -1;
  int to = -1;
};

struct BoundaryLoop {
  std::vector<int> vertices;
  /// edges[i] runs vertices[i] -> vertices[i + 1] (cyclically).
  std::vector<BoundaryEdge> edges;
};

/// Indexed, consistently oriented triangle mesh with boundary.
///
/// Corners are numbered 3 * face + local index, so per-corner arrays line up
/// with `faces`.
class TriMesh {
 public:
  TriMesh() = default;
  /// Validates and indexes the input; throws MeshError on violations.
  TriMesh(std::vector<Eigen::Vector3d> positions, std::vector<std::array<int, 3>> faces,
          bool require_boundary = true);

  int num_vertices() const { return static_cast<int>(positions_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int num_corners() const { return 3 * num_faces(); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_interior_edges() const { return static_cast<int>(interior_edges_.size()); }
  int num_boundary_edges() const { return num_edges() - num_interior_edges(); }

  const std::vector<Eigen::Vector3d>& positions() const { return positions_; }
  const Eigen::Vector3d& position(int v) const { return positions_[v]; }
  const std::vector<std::array<int, 3>>& faces() const { return faces_; }
  const std::array<int, 3>& face(int f) const { return faces_[f]; }
  int corner_vertex(int c) const { return faces_[c / 3][c % 3]; }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }
  /// Edge opposite local corner i of face f.
  int face_edge(int f, int i) const { return face_edges_[f][i]; }

  /// Interior edges in a compact numbering used by the edge-based fields.
  const std::vector<int>& interior_edges() const { return interior_edges_; }
  /// Compact interior index of edge e, or -1 for boundary edges.
  int interior_index(int e) const { return interior_index_[e]; }

  const std::vector<BoundaryLoop>& boundary_loops() const { return loops_; }
  bool is_boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }
  int num_boundary_vertices() const;

  /// Corners incident on vertex v, in face order.
  const std::vector<int>& vertex_corners(int v) const { return vertex_corners_[v]; }

  double face_area(int f) const { return face_area_[f]; }
  double vertex_area(int v) const { return vertex_area_[v]; }
  double total_area() const { return total_area_; }
  const Eigen::Vector3d& face_normal(int f) const { return face_normal_[f]; }
  const Eigen::Vector3d& vertex_normal(int v) const { return vertex_normal_[v]; }
  /// Interior angle at corner c.
  double corner_angle(int c) const { return corner_angle_[c]; }

  int euler_characteristic() const { return num_vertices() - num_edges() + num_faces(); }

 private:
  void build_edges();
  void build_boundary(bool require_boundary);
  void build_measures();

  std::vector<Eigen::Vector3d> positions_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> face_edges_;
  std::vector<int> interior_edges_;
  std::vector<int> interior_index_;
  std::vector<BoundaryLoop> loops_;
  std::vector<char> boundary_vertex_;
  std::vector<std::vector<int>> vertex_corners_;
  std::vector<double> face_area_;
  std::vector<double> vertex_area_;
  std::vector<Eigen::Vector3d> face_normal_;
  std::vector<Eigen::Vector3d> vertex_normal_;
  std::vector<double> corner_angle_;
  double total_area_ = 0.0;
};

/// Reads an ASCII OBJ (v/f records, 1-based or negative indices, triangles only).
TriMesh load_mesh(const std::string& path);
/// Parses OBJ text; `source` is used in error messages.
TriMesh parse_obj(const std::string& text, const std::string& source = "<memory>",
                  bool require_boundary = true);
void write_obj(const TriMesh& mesh, const std::string& path);

}  // namespace minsec
