#pragma once

#include "minsec/solver.hpp"

#include <vector>

namespace minsec {

/// Per-vertex field in the degree-d representation of the vertex frame.
struct ExtractedField {
  int degree = 1;
  Eigen::VectorXcd z;          // unit where defined, 0 elsewhere
  Eigen::VectorXd angle;       // arg z: the degree-d angle
  Eigen::VectorXd confidence;  // |f_{-1}| before normalization
  std::vector<char> defined;

  int num_undefined() const;
};

/// z_v = -i f_{-1,v} / |f_{-1,v}| with f_{-1} = conj(f_1); undefined where |f_1| <= 1e-12.
ExtractedField extract_field(const Eigen::VectorXcd& f1, int degree);
ExtractedField extract_field(const Problem& p, const BundleState& s);
/// Field with the given degree-d angles (all defined, confidence 1).
ExtractedField field_from_angles(const Eigen::VectorXd& angle, int degree);

struct Singularity {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double mass = 0;     // sum of M-hat_e Gamma_e over the cluster
  double index = 0;    // mass / d
  double rounded = 0;  // index rounded to the nearest 1/d
  double residual = 0; // index - rounded
  std::vector<int> edges;
};

struct SingularitySet {
  int degree = 1;
  std::vector<Singularity> clusters;
  double total_mass = 0;       // sum of M-hat_e Gamma_e over all edges
  double unclustered_mass = 0; // total_mass - sum of cluster masses

  double index_sum() const;
};

/// Groups interior edges with |Gamma_e| > threshold * max |Gamma| into clusters
/// of edges sharing a vertex. `edge_mass` is the CR mass per interior edge.
SingularitySet extract_singularities(const TriMesh& mesh, const Eigen::VectorXd& gamma,
                                     const Eigen::VectorXd& edge_mass, int degree, double threshold = 1e-3);

/// Mass fraction of |Sigma|_g within fiber distance theta of the extracted
/// angle, averaged over vertices with area weights. Each sample spreads its
/// mass uniformly over its increment cell. Throws on zero total mass.
std::vector<double> concentration_cdf(const Problem& p, const BundleState& s, const ExtractedField& field,
                                      const std::vector<double>& thetas);
/// theta = pi m / 32 for m = 0..32.
std::vector<double> default_cdf_grid();

/// Per-vertex W2 distance between the normalized fiber mass (point masses at
/// the increments) and a Dirac at the extracted angle; NaN where undefined.
Eigen::VectorXd fiber_w2(const Problem& p, const BundleState& s, const ExtractedField& field);

/// |D sigma| per face from the transported, unwrapped corner angles (degree-d).
/// Faces touching an undefined vertex get NaN.
Eigen::VectorXd face_angle_gradient(const TriMesh& mesh, const TransportAtlas& atlas, const LinearFem& fem,
                                    const ExtractedField& field);

struct GraphArea {
  double area = 0;       // sum over included faces of A_T sqrt(1 + r^2 |D sigma|^2)
  double base_area = 0;  // sum of A_T over the same faces
  int excluded_faces = 0;
  double helicoid = 0;   // analytic area added for excluded disks
  double total() const { return area + helicoid; }
};

/// Faces whose centroid lies within `exclusion_radius` of a center are skipped;
/// with `add_helicoid` each center contributes helicoid_area(R / r, r).
GraphArea graph_area(const TriMesh& mesh, const TransportAtlas& atlas, const LinearFem& fem,
                     const ExtractedField& field, double radius, const std::vector<Eigen::Vector3d>& centers = {},
                     double exclusion_radius = 0, bool add_helicoid = false);

/// pi r^2 (k sqrt(1 + k^2) + asinh k): area of a helicoid over a disk of radius k r.
double helicoid_area(double k, double radius);

struct BaselineField {
  ExtractedField field;
  double eigenvalue = 0;
  double residual = 0;  // |S x - lambda M x| / |x|
  int iterations = 0;
};

/// Smallest generalized eigenvector of the covariant Dirichlet form (degree-d
/// transport) against the vertex mass matrix, by shifted inverse iteration.
BaselineField baseline_smoothest_field(const TriMesh& mesh, const TransportAtlas& atlas, int degree,
                                       int max_iters = 500, double tol = 1e-8);
/// Covariant harmonic field with Dirichlet boundary values e^{i gamma}.
ExtractedField baseline_aligned_field(const TriMesh& mesh, const TransportAtlas& atlas, const BoundaryData& bd);

/// sum over faces of A_T |grad|^2 with vertex values transported by rho^{d}.
SpMatC covariant_dirichlet(const TriMesh& mesh, const TransportAtlas& atlas, const LinearFem& fem, int degree);

}  // namespace minsec
