#include "minsec/fixtures.hpp"

#include <Eigen/Geometry>


#include <cmath>
#include <numbers>
#include <random>

namespace minsec::fixtures {

namespace {

constexpr double kPi = std::numbers::pi;

struct Ring {
  int first = 0;  // index of the first vertex
  int count = 0;
  double offset = 0;  // angle of the first vertex
};

// Triangulates the band between two concentric rings by merging their angles.
void stitch(const Ring& in, const Ring& out, std::vector<std::array<int, 3>>& faces) {
  auto angle = [](const Ring& r, int i) { return r.offset + 2 * kPi * i / r.count; };
  auto id = [](const Ring& r, int i) { return r.first + i % r.count; };
  int i = 0, j = 0;
  while (i < in.count || j < out.count) {
    const bool advance_out = i == in.count || (j < out.count && angle(out, j + 1) <= angle(in, i + 1));
    if (advance_out) {
      faces.push_back({id(in, i), id(out, j), id(out, j + 1)});
      ++j;
    } else {
      faces.push_back({id(in, i), id(out, j), id(in, i + 1)});
      ++i;
    }
  }
}

std::vector<Eigen::Vector3d> hex_disk_points(int rings, double radius, std::vector<std::array<int, 3>>& faces) {
  std::vector<Eigen::Vector3d> pts{Eigen::Vector3d::Zero()};
  Ring prev{0, 1, 0};
  for (int r = 1; r <= rings; ++r) {
    Ring ring{static_cast<int>(pts.size()), 6 * r, 0.0};
    const double rad = radius * r / rings;
    for (int j = 0; j < ring.count; ++j) {
      const double a = 2 * kPi * j / ring.count;
      pts.emplace_back(rad * std::cos(a), rad * std::sin(a), 0.0);
    }
    if (r == 1) {
      for (int j = 0; j < ring.count; ++j) faces.push_back({0, ring.first + j, ring.first + (j + 1) % ring.count});
    } else {
      stitch(prev, ring, faces);
    }
    prev = ring;
  }
  return pts;
}

}  // namespace

TriMesh single_triangle() {
  return TriMesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
}

TriMesh disk_fan(int rim, double radius) {
  std::vector<Eigen::Vector3d> pts{Eigen::Vector3d::Zero()};
  std::vector<std::array<int, 3>> faces;
  for (int j = 0; j < rim; ++j) {
    const double a = 2 * kPi * j / rim;
    pts.emplace_back(radius * std::cos(a), radius * std::sin(a), 0.0);
  }
  for (int j = 0; j < rim; ++j) faces.push_back({0, 1 + j, 1 + (j + 1) % rim});
  return TriMesh(std::move(pts), std::move(faces));
}

TriMesh disk(int rings, double radius, double jitter, unsigned seed) {
  std::vector<std::array<int, 3>> faces;
  auto pts = hex_disk_points(rings, radius, faces);
  if (jitter > 0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double h = radius / rings;
    const int interior = 1 + 3 * (rings - 1) * rings;
    for (int v = 0; v < interior; ++v) {
      pts[v].x() += jitter * h * unit(rng);
      pts[v].y() += jitter * h * unit(rng);
    }
  }
  return TriMesh(std::move(pts), std::move(faces));
}

TriMesh unit_area_disk(int min_vertices, double jitter, unsigned seed) {
  int rings = 1;
  while (1 + 3 * rings * (rings + 1) < min_vertices) ++rings;
  // Scale the radius so the polygon (not the circle) has unit area.
  const int rim = 6 * rings;
  const double polygon_area_unit = 0.5 * rim * std::sin(2 * kPi / rim);
  return disk(rings, 1.0 / std::sqrt(polygon_area_unit), jitter, seed);
}

TriMesh annulus(double inner, double outer, int around, int radial) {
  std::vector<Eigen::Vector3d> pts;
  std::vector<std::array<int, 3>> faces;
  Ring prev;
  for (int r = 0; r <= radial; ++r) {
    const double rad = inner + (outer - inner) * r / radial;
    Ring ring{static_cast<int>(pts.size()), around, (r % 2) * kPi / around};
    for (int j = 0; j < around; ++j) {
      const double a = ring.offset + 2 * kPi * j / around;
      pts.emplace_back(rad * std::cos(a), rad * std::sin(a), 0.0);
    }
    if (r > 0) stitch(prev, ring, faces);
    prev = ring;
  }
  return TriMesh(std::move(pts), std::move(faces));
}

TriMesh spherical_cap(int rings, double half_angle) {
  std::vector<std::array<int, 3>> faces;
  auto pts = hex_disk_points(rings, 1.0, faces);
  for (auto& p : pts) {
    const double rho = std::hypot(p.x(), p.y());
    const double polar = rho * half_angle;
    const double az = std::atan2(p.y(), p.x());
    p = Eigen::Vector3d(std::sin(polar) * std::cos(az), std::sin(polar) * std::sin(az), std::cos(polar));
  }
  return TriMesh(std::move(pts), std::move(faces));
}

TriMesh saddle(int rings, double amplitude) {
  std::vector<std::array<int, 3>> faces;
  auto pts = hex_disk_points(rings, 1.0, faces);
  for (auto& p : pts) p.z() = amplitude * (p.x() * p.x() - p.y() * p.y());
  return TriMesh(std::move(pts), std::move(faces));
}

TriMesh rectangle(double width, double height, int nx, int ny) {
  std::vector<Eigen::Vector3d> pts;
  std::vector<std::array<int, 3>> faces;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) pts.emplace_back(width * i / nx, height * j / ny, 0.0);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      if ((i + j) % 2 == 0) {
        faces.push_back({a, b, c});
        faces.push_back({a, c, d});
      } else {
        faces.push_back({a, b, d});
        faces.push_back({b, c, d});
      }
    }
  }
  return TriMesh(std::move(pts), std::move(faces));
}

namespace {

std::pair<std::vector<Eigen::Vector3d>, std::vector<std::array<int, 3>>> icosahedron() {
  const double phi = (1 + std::sqrt(5.0)) / 2;
  std::vector<Eigen::Vector3d> v = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                                    {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                                    {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (auto& t : f) {
    const Eigen::Vector3d n = (v[t[1]] - v[t[0]]).cross(v[t[2]] - v[t[0]]);
    if (n.dot(v[t[0]] + v[t[1]] + v[t[2]]) < 0) std::swap(t[1], t[2]);
  }
  return {v, f};
}

}  // namespace

TriMesh open_icosahedron() {
  auto [v, f] = icosahedron();
  f.erase(f.begin());
  return TriMesh(std::move(v), std::move(f));
}

TriMesh closed_tetrahedron() {
  std::vector<Eigen::Vector3d> v = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  std::vector<std::array<int, 3>> f = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  return TriMesh(std::move(v), std::move(f), /*require_boundary=*/false);
}

}  // namespace minsec::fixtures
