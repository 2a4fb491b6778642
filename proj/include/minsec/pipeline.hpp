#pragma once

#include "minsec/extract.hpp"
#include "minsec/run_config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace minsec {

enum ExitCode : int { exit_converged = 0, exit_error = 1, exit_max_iters = 2 };

/// Mask file: "v i" masks every interior edge at vertex i, "e a b" the edge a-b.
/// Returns sorted compact interior-edge ids.
std::vector<int> read_mask(const TriMesh& mesh, const std::string& path);
/// Per-vertex "index lambda" lines, averaged onto interior edges. Vertices not
/// listed take `fallback`.
Eigen::VectorXd read_lambda_field(const TriMesh& mesh, const std::string& path, double fallback);

struct FieldRecord {
  int vertex = -1;
  double angle = 0;
  double confidence = 0;
};
std::vector<FieldRecord> read_field_file(const std::string& path);
/// Rows "v e1x e1y e1z e2x e2y e2z".
std::vector<Frame> read_frames_file(const std::string& path);

void write_field(const std::string& path, const ExtractedField& field);
void write_frames(const std::string& path, const TransportAtlas& atlas);
void write_singularities(const std::string& path, const SingularitySet& s);
/// Rows "interior_index v0 v1 gamma".
void write_gamma(const std::string& path, const TriMesh& mesh, const Eigen::VectorXd& gamma);
/// Rows "corner v |Sigma|_g(m = 0) ... |Sigma|_g(m = N-1)".
void write_current(const std::string& path, const TriMesh& mesh, const kernels::CovectorSamples& sigma,
                   double radius);

/// Runs the configured pipeline and writes the artifacts into config.out.
/// Returns exit_converged or exit_max_iters; throws on invalid input.
int run(const RunConfig& config, std::ostream& log);

}  // namespace minsec
