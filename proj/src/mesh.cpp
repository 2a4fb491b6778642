#include "minsec/mesh.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace minsec {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

TriMesh::TriMesh(std::vector<Eigen::Vector3d> positions, std::vector<std::array<int, 3>> faces,
                 bool require_boundary)
    : positions_(std::move(positions)), faces_(std::move(faces)) {
  if (faces_.empty()) throw MeshError("mesh has no faces");
  const int nv = num_vertices();
  for (int f = 0; f < num_faces(); ++f) {
    const auto& t = faces_[f];
    for (int i = 0; i < 3; ++i) {
      if (t[i] < 0 || t[i] >= nv)
        throw MeshError("face " + std::to_string(f) + " references missing vertex " +
                        std::to_string(t[i]));
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw MeshError("face " + std::to_string(f) + " has repeated vertices");
  }
  build_measures();
  build_edges();
  build_boundary(require_boundary);
}

int TriMesh::num_boundary_vertices() const {
  return static_cast<int>(std::count(boundary_vertex_.begin(), boundary_vertex_.end(), 1));
}

void TriMesh::build_measures() {
  const int nf = num_faces();
  const int nv = num_vertices();
  face_area_.resize(nf);
  face_normal_.resize(nf);
  corner_angle_.resize(3 * nf);
  vertex_area_.assign(nv, 0.0);
  vertex_normal_.assign(nv, Eigen::Vector3d::Zero());
  vertex_corners_.assign(nv, {});

  total_area_ = 0.0;
  for (int f = 0; f < nf; ++f) {
    const auto& t = faces_[f];
    const Eigen::Vector3d n = (positions_[t[1]] - positions_[t[0]]).cross(positions_[t[2]] - positions_[t[0]]);
    face_area_[f] = 0.5 * n.norm();
    total_area_ += face_area_[f];
  }
  const double floor = 1e-12 * total_area_ / nf;
  for (int f = 0; f < nf; ++f) {
    if (!(face_area_[f] >= floor))
      throw MeshError("degenerate triangle " + std::to_string(f) + " (area " +
                      std::to_string(face_area_[f]) + ")");
  }

  for (int f = 0; f < nf; ++f) {
    const auto& t = faces_[f];
    const Eigen::Vector3d n = (positions_[t[1]] - positions_[t[0]]).cross(positions_[t[2]] - positions_[t[0]]);
    face_normal_[f] = n.normalized();
    for (int i = 0; i < 3; ++i) {
      const int v = t[i];
      const Eigen::Vector3d a = positions_[t[(i + 1) % 3]] - positions_[v];
      const Eigen::Vector3d b = positions_[t[(i + 2) % 3]] - positions_[v];
      corner_angle_[3 * f + i] = std::atan2(a.cross(b).norm(), a.dot(b));
      vertex_area_[v] += face_area_[f] / 3.0;
      vertex_normal_[v] += n;  // |n| = 2A, so this is area weighted
      vertex_corners_[v].push_back(3 * f + i);
    }
  }
  for (int v = 0; v < nv; ++v) {
    const double len = vertex_normal_[v].norm();
    if (vertex_corners_[v].empty()) throw MeshError("isolated vertex " + std::to_string(v));
    if (len <= 0.0) throw MeshError("zero vertex normal at vertex " + std::to_string(v));
    vertex_normal_[v] /= len;
  }
}

void TriMesh::build_edges() {
  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(3 * faces_.size());
  face_edges_.assign(faces_.size(), {-1, -1, -1});
  for (int f = 0; f < num_faces(); ++f) {
    const auto& t = faces_[f];
    for (int i = 0; i < 3; ++i) {
      const int a = t[(i + 1) % 3];
      const int b = t[(i + 2) % 3];
      auto [it, inserted] = lookup.try_emplace(edge_key(a, b), static_cast<int>(edges_.size()));
      if (inserted) {
        Edge e;
        e.v0 = a;
        e.v1 = b;
        e.face[0] = f;
        e.opposite_corner[0] = 3 * f + i;
        edges_.push_back(e);
      } else {
        Edge& e = edges_[it->second];
        if (e.face[1] >= 0)
          throw MeshError("non-manifold edge " + std::to_string(it->second) + " (" + std::to_string(a) +
                          ", " + std::to_string(b) + ") has more than 2 incident faces");
        if (e.v0 != b || e.v1 != a)
          throw MeshError("inconsistent orientation at edge " + std::to_string(it->second) + " (" +
                          std::to_string(a) + ", " + std::to_string(b) + ")");
        e.face[1] = f;
        e.opposite_corner[1] = 3 * f + i;
      }
      face_edges_[f][i] = it->second;
    }
  }
  interior_index_.assign(edges_.size(), -1);
  for (int e = 0; e < num_edges(); ++e) {
    if (!edges_[e].boundary()) {
      interior_index_[e] = static_cast<int>(interior_edges_.size());
      interior_edges_.push_back(e);
    }
  }
}

void TriMesh::build_boundary(bool require_boundary) {
  const int nv = num_vertices();
  boundary_vertex_.assign(nv, 0);
  // Outgoing boundary half-edge per vertex, as oriented in its face.
  std::vector<int> next_edge(nv, -1);
  int nb = 0;
  for (int e = 0; e < num_edges(); ++e) {
    const Edge& ed = edges_[e];
    if (!ed.boundary()) continue;
    ++nb;
    if (next_edge[ed.v0] >= 0)
      throw MeshError("non-manifold boundary vertex " + std::to_string(ed.v0));
    next_edge[ed.v0] = e;
    boundary_vertex_[ed.v0] = 1;
    boundary_vertex_[ed.v1] = 1;
  }
  if (nb == 0) {
    if (require_boundary) throw MeshError("no boundary loop");
    return;
  }
  std::vector<char> visited(edges_.size(), 0);
  for (int e0 = 0; e0 < num_edges(); ++e0) {
    if (!edges_[e0].boundary() || visited[e0]) continue;
    BoundaryLoop loop;
    int e = e0;
    while (!visited[e]) {
      visited[e] = 1;
      const Edge& ed = edges_[e];
      loop.vertices.push_back(ed.v0);
      loop.edges.push_back({e, ed.face[0], ed.v0, ed.v1});
      e = next_edge[ed.v1];
      if (e < 0) throw MeshError("open boundary chain at vertex " + std::to_string(ed.v1));
    }
    if (e != e0) throw MeshError("boundary loop through edge " + std::to_string(e0) + " does not close");
    loops_.push_back(std::move(loop));
  }
}

}  // namespace minsec
