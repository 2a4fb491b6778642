#include "minsec/transport.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace minsec {

namespace {

// Minimal rotation taking unit vector from onto unit vector to.
Eigen::Matrix3d principal_rotation(const Eigen::Vector3d& from, const Eigen::Vector3d& to) {
  return Eigen::Quaterniond::FromTwoVectors(from, to).toRotationMatrix();
}

void check_frame(const Frame& f, const Eigen::Vector3d& n, const std::string& what) {
  const double tol = 1e-9;
  if (std::abs(f.e1.norm() - 1) > tol || std::abs(f.e2.norm() - 1) > tol || std::abs(f.e1.dot(f.e2)) > tol ||
      std::abs(f.e1.dot(n)) > tol || (f.e1.cross(f.e2) - n).norm() > 1e-6)
    throw std::invalid_argument(what + " is not an oriented orthonormal tangent frame");
}

}  // namespace

std::vector<Frame> default_vertex_frames(const TriMesh& mesh) {
  std::vector<Frame> frames(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Eigen::Vector3d& n = mesh.vertex_normal(v);
    const int c = mesh.vertex_corners(v).front();
    const auto& t = mesh.face(c / 3);
    const Eigen::Vector3d d = mesh.position(t[(c % 3 + 1) % 3]) - mesh.position(v);
    Eigen::Vector3d e1 = d - d.dot(n) * n;
    if (e1.norm() < 1e-14 * d.norm()) {
      // First edge parallel to the normal; any tangent direction will do.
      e1 = n.unitOrthogonal();
    }
    if (!(e1.norm() > 0)) throw MeshError("frame construction failed at vertex " + std::to_string(v));
    e1.normalize();
    frames[v] = {e1, n.cross(e1)};
  }
  return frames;
}

std::vector<Frame> default_face_frames(const TriMesh& mesh) {
  std::vector<Frame> frames(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& t = mesh.face(f);
    const Eigen::Vector3d e1 = (mesh.position(t[1]) - mesh.position(t[0])).normalized();
    frames[f] = {e1, mesh.face_normal(f).cross(e1)};
  }
  return frames;
}

Frame rotated(const Frame& f, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * f.e1 + s * f.e2, -s * f.e1 + c * f.e2};
}

cdouble unit_power(cdouble z, long long n) {
  if (n == 0) return 1.0;
  if (n < 0) return unit_power(std::conj(z), -n);
  cdouble result = 1.0;
  cdouble base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

TransportAtlas build_transport(const TriMesh& mesh) {
  const auto vf = default_vertex_frames(mesh);
  const auto ff = default_face_frames(mesh);
  return build_transport(mesh, vf, ff);
}

TransportAtlas build_transport(const TriMesh& mesh, std::span<const Frame> vertex_frames,
                               std::span<const Frame> face_frames) {
  if (static_cast<int>(vertex_frames.size()) != mesh.num_vertices() ||
      static_cast<int>(face_frames.size()) != mesh.num_faces())
    throw std::invalid_argument("frame count does not match mesh");
  TransportAtlas atlas;
  atlas.vertex_frames.assign(vertex_frames.begin(), vertex_frames.end());
  atlas.face_frames.assign(face_frames.begin(), face_frames.end());
  for (int v = 0; v < mesh.num_vertices(); ++v)
    check_frame(vertex_frames[v], mesh.vertex_normal(v), "frame at vertex " + std::to_string(v));
  for (int f = 0; f < mesh.num_faces(); ++f)
    check_frame(face_frames[f], mesh.face_normal(f), "frame at face " + std::to_string(f));

  atlas.corner_transport.resize(mesh.num_corners());
  for (int c = 0; c < mesh.num_corners(); ++c) {
    const int a = mesh.corner_vertex(c);
    const int t = c / 3;
    const Eigen::Matrix3d R = principal_rotation(mesh.vertex_normal(a), mesh.face_normal(t));
    const Eigen::Vector3d r1 = R * vertex_frames[a].e1;
    const double u = face_frames[t].e1.dot(r1);
    const double v = face_frames[t].e2.dot(r1);
    atlas.corner_transport[c] = cdouble(u, v) / std::hypot(u, v);
  }

  const int nv = mesh.num_vertices();
  atlas.vertex_curvature.assign(nv, 0.0);
  atlas.boundary_turning.assign(nv, 0.0);
  for (int v = 0; v < nv; ++v) {
    double angle_sum = 0.0;
    for (int c : mesh.vertex_corners(v)) angle_sum += mesh.corner_angle(c);
    if (mesh.is_boundary_vertex(v)) {
      atlas.boundary_turning[v] = std::numbers::pi - angle_sum;
    } else {
      atlas.vertex_curvature[v] = (2 * std::numbers::pi - angle_sum) / mesh.vertex_area(v);
    }
  }
  atlas.edge_curvature.resize(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edge(e);
    atlas.edge_curvature[e] = 0.5 * (atlas.vertex_curvature[ed.v0] + atlas.vertex_curvature[ed.v1]);
  }
  return atlas;
}

cdouble TransportAtlas::rho(const TriMesh& mesh, int a, int face) const {
  if (face < 0 || face >= mesh.num_faces()) throw std::invalid_argument("face index out of range");
  const auto& t = mesh.face(face);
  for (int i = 0; i < 3; ++i)
    if (t[i] == a) return corner_transport[3 * face + i];
  throw std::invalid_argument("vertex " + std::to_string(a) + " is not incident on face " + std::to_string(face));
}

cdouble transport_power(const TriMesh& mesh, const TransportAtlas& atlas, int a, int face, int k, int degree) {
  return unit_power(atlas.rho(mesh, a, face), -static_cast<long long>(k) * degree);
}

}  // namespace minsec
