#pragma once

#include "minsec/mesh.hpp"

namespace minsec::fixtures {

// Deterministic test and benchmark meshes. All planar meshes lie in z = 0 and
// are oriented counterclockwise seen from +z.

TriMesh single_triangle();
/// Center vertex plus `rim` vertices on a circle.
TriMesh disk_fan(int rim = 8, double radius = 1.0);
/// Concentric rings of 6i vertices (1 + 3 rings (rings + 1) vertices in total).
/// Interior vertices are displaced by up to `jitter` times the ring spacing.
TriMesh disk(int rings, double radius = 1.0, double jitter = 0.0, unsigned seed = 1);
/// Disk of unit area with at least `min_vertices` vertices.
TriMesh unit_area_disk(int min_vertices, double jitter = 0.0, unsigned seed = 1);
/// Annulus with `around` vertices per ring and `radial` ring gaps.
TriMesh annulus(double inner, double outer, int around, int radial);
/// Cap of the unit sphere with polar half-angle `half_angle`, meshed from `disk(rings)`.
TriMesh spherical_cap(int rings, double half_angle);
/// Graph of z = amplitude (x^2 - y^2) over `disk(rings)`.
TriMesh saddle(int rings, double amplitude = 0.5);
/// Axis-aligned rectangle split into 2 nx ny triangles with alternating diagonals.
TriMesh rectangle(double width, double height, int nx, int ny);
/// Regular unit-circumradius icosahedron with one face removed.
TriMesh open_icosahedron();
/// Closed tetrahedron (no boundary); built without the boundary requirement.
TriMesh closed_tetrahedron();

}  // namespace minsec::fixtures
