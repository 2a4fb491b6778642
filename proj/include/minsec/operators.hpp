#pragma once

#include "minsec/transport.hpp"

#include <Eigen/Sparse>

#include <array>
#include <vector>

namespace minsec {

using SpMat = Eigen::SparseMatrix<double>;
using SpMatC = Eigen::SparseMatrix<cdouble>;

/// Conforming P1 quantities. Face vectors live in the face frame; 2-vector
/// fields are stacked as (x_0, y_0, x_1, y_1, ...).
struct LinearFem {
  /// Gradient of the hat function at each corner, indexed by corner.
  std::vector<Eigen::Vector2d> corner_grad;
  Eigen::VectorXd area;  // per face
  SpMat G;               // 2F x C
  SpMat A;               // 2F x 2F, face area per component
  SpMat M;               // C x C, exact P1 mass (A/6 diagonal, A/12 off-diagonal)
  SpMat U;               // 2F x 2C, average of the three corner vectors of a face
  SpMat J;               // 2F x 2F, quarter turn counterclockwise
};

/// Crouzeix-Raviart quantities on interior edges (boundary midpoints pinned to 0).
struct CrouzeixRaviart {
  /// Gradient of the basis function of each face edge, indexed 3 * face + i.
  std::vector<Eigen::Vector2d> edge_grad;
  SpMat G;               // 2F x E_int
  Eigen::VectorXd mass;  // diagonal of M-hat: sum of A_T / 3 over incident faces
  SpMat L;               // E_int x E_int, G^T A G
};

/// Covariant and CR operators for a fixed mesh, degree, fiber radius and
/// frequency cutoff. Only k >= 0 is stored: P_{-k} = conj(P_k), L_{-k} = conj(L_k).
struct OperatorSet {
  int degree = 1;
  double radius = 1.0;
  int max_frequency = 0;
  LinearFem fem;
  CrouzeixRaviart cr;
  std::vector<SpMatC> P;  // P[k], C x V
  SpMat L0;               // V x V
  std::vector<SpMatC> L;  // L[k] for k >= 1 (L[0] left empty)
  /// Boundary tangential restriction: row b integrates t . v over boundary edge b
  /// (edges in boundary-loop order), |E_b| x 2F.
  SpMat B;
  std::vector<BoundaryEdge> boundary_edges;
};

LinearFem assemble_linear_fem(const TriMesh& mesh, const TransportAtlas& atlas);

/// Covariant corner-vertex incidence with entries rho^{-k d}.
SpMatC assemble_P(const TriMesh& mesh, const TransportAtlas& atlas, int k, int degree);

/// P_k^H G^T A G P_k + r^-2 k^2 P_k^H M P_k, assembled face by face.
SpMatC assemble_L(const TriMesh& mesh, const TransportAtlas& atlas, const LinearFem& fem, int k, int degree,
                  double radius);
/// Same matrix via the sparse products; the reference for assemble_L.
SpMatC assemble_L_products(const LinearFem& fem, const SpMatC& Pk, int k, double radius);

/// Throws MeshError when the mesh has no interior edge.
CrouzeixRaviart assemble_cr(const TriMesh& mesh, const TransportAtlas& atlas, const LinearFem& fem);

SpMat assemble_boundary_restriction(const TriMesh& mesh, const TransportAtlas& atlas,
                                    std::vector<BoundaryEdge>* edges = nullptr);

/// Everything above for frequencies 0..K. Distinct k are assembled in parallel.
OperatorSet assemble_operators(const TriMesh& mesh, const TransportAtlas& atlas, int degree, double radius,
                               int max_frequency);

/// Face-frame coordinates of the three face vertices (first vertex at the origin).
std::array<Eigen::Vector2d, 3> face_coordinates(const TriMesh& mesh, const TransportAtlas& atlas, int face);

}  // namespace minsec
