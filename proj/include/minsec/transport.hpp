#pragma once

#include "minsec/mesh.hpp"

#include <complex>
#include <span>
#include <vector>

namespace minsec {

using cdouble = std::complex<double>;

/// Orthonormal tangent frame; e2 = n x e1 for the local normal n.
struct Frame {
  Eigen::Vector3d e1 = Eigen::Vector3d::UnitX();
  Eigen::Vector3d e2 = Eigen::Vector3d::UnitY();
};

/// Discrete Levi-Civita connection: vertex and face frames, unit-complex
/// vertex-to-face transports, and angle-defect curvature.
struct TransportAtlas {
  std::vector<Frame> vertex_frames;
  std::vector<Frame> face_frames;
  /// rho_{a->T} for the corner of T at vertex a, indexed by corner.
  std::vector<cdouble> corner_transport;
  /// Angle defect per unit area; zero at boundary vertices (see boundary_turning).
  std::vector<double> vertex_curvature;
  /// Mean of endpoint curvatures, for every edge.
  std::vector<double> edge_curvature;
  /// Geodesic turning angle (pi - angle sum) at boundary vertices, zero elsewhere.
  std::vector<double> boundary_turning;

  /// rho_{a->T}; throws std::invalid_argument when a is not a vertex of T.
  cdouble rho(const TriMesh& mesh, int a, int face) const;
};

/// Default frames: vertex e1 is the first incident edge projected to the
/// tangent plane of the area-weighted normal; face e1 runs along edge (0,1).
TransportAtlas build_transport(const TriMesh& mesh);

/// Same construction with caller-supplied frames (must be orthonormal and
/// tangent to the respective normals).
TransportAtlas build_transport(const TriMesh& mesh, std::span<const Frame> vertex_frames,
                               std::span<const Frame> face_frames);

std::vector<Frame> default_vertex_frames(const TriMesh& mesh);
std::vector<Frame> default_face_frames(const TriMesh& mesh);

/// Frame rotated counterclockwise (about its normal) by `angle`.
Frame rotated(const Frame& f, double angle);

/// Integer power of a unit complex number, exact for the identity and +-i.
cdouble unit_power(cdouble z, long long n);

/// rho_{a->T}^{-k d}: the transport of a frequency-k Fourier coefficient on the
/// degree-d bundle.
cdouble transport_power(const TriMesh& mesh, const TransportAtlas& atlas, int a, int face, int k, int degree);

}  // namespace minsec
