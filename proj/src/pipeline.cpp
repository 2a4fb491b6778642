#include "minsec/pipeline.hpp"

#include "minsec/reduced.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace minsec {

namespace {

std::ifstream open_in(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(std::string(what) + " not found: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(17);
  return out;
}

std::string strip_comment(std::string line) {
  const auto hash = line.find('#');
  if (hash != std::string::npos) line.resize(hash);
  return line;
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

int find_edge(const TriMesh& mesh, int a, int b) {
  for (int c : mesh.vertex_corners(a)) {
    const int f = c / 3;
    for (int i = 0; i < 3; ++i) {
      const Edge& e = mesh.edge(mesh.face_edge(f, i));
      if ((e.v0 == a && e.v1 == b) || (e.v0 == b && e.v1 == a)) return mesh.face_edge(f, i);
    }
  }
  return -1;
}

void check_vertex(const TriMesh& mesh, int v, const std::string& path, int lineno) {
  if (v < 0 || v >= mesh.num_vertices())
    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": vertex " + std::to_string(v) +
                             " out of range");
}

double mean_edge_length(const TriMesh& mesh) {
  double s = 0;
  for (const Edge& e : mesh.edges()) s += (mesh.position(e.v0) - mesh.position(e.v1)).norm();
  return mesh.num_edges() > 0 ? s / mesh.num_edges() : 0.0;
}

template <class T>
void write_series(std::ostream& out, const char* name, const std::vector<T>& xs) {
  out << name;
  for (const T& x : xs) out << ' ' << x;
  out << '\n';
}

void write_timings(std::ostream& out, const PhaseTimes& t, double wall) {
  out << "timing setup " << t.setup << '\n'
      << "timing global_k " << t.global_k << '\n'
      << "timing global_0 " << t.global_0 << '\n'
      << "timing reconstruct " << t.reconstruct << '\n'
      << "timing local " << t.local << '\n'
      << "timing dual " << t.dual << '\n'
      << "timing wall " << wall << '\n';
}

SolverConfig solver_config(const RunConfig& rc, const TriMesh& mesh) {
  SolverConfig sc;
  sc.degree = rc.degree;
  sc.radius = rc.radius;
  sc.N = rc.N;
  sc.lambda = rc.lambda;
  sc.epsilon = rc.epsilon;
  sc.max_iters = rc.max_iters;
  sc.mu = rc.mu;
  sc.nu = rc.nu;
  if (!rc.lambda_field.empty()) sc.lambda_field = read_lambda_field(mesh, rc.lambda_field, rc.lambda);
  if (!rc.mask.empty()) sc.mask = read_mask(mesh, rc.mask);
  return sc;
}

BoundarySpec boundary_spec(const RunConfig& rc) {
  if (rc.boundary == "tangent") return BoundarySpec::Tangent();
  return read_boundary_angles(rc.boundary);
}

int run_minsec(const RunConfig& rc, const TriMesh& mesh, const std::filesystem::path& out, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  Problem p(mesh, solver_config(rc, mesh), boundary_spec(rc));
  BundleState s = init_state(p);
  AdmmReport rep = run_admm(p, s);
  rep.times.setup = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() - rep.wall_time;

  const ExtractedField field = extract_field(p, s);
  const SingularitySet sing = extract_singularities(mesh, s.gamma, p.ops().cr.mass, rc.degree);
  write_field((out / "field.txt").string(), field);
  write_frames((out / "frames.txt").string(), p.atlas());
  write_singularities((out / "singularities.txt").string(), sing);
  write_gamma((out / "gamma.txt").string(), mesh, s.gamma);
  if (rc.emit_current) write_current((out / "current.txt").string(), mesh, s.sigma, rc.radius);

  std::ofstream d = open_out((out / "diagnostics.txt").string());
  d << "mode minsec\n"
    << "converged " << (rep.converged ? 1 : 0) << '\n'
    << "iterations " << rep.iterations << '\n'
    << "objective_sigma " << rep.objective.sigma << '\n'
    << "objective_gamma " << rep.objective.gamma << '\n'
    << "objective " << rep.objective.total() << '\n'
    << "max_kkt_residual " << rep.max_kkt_residual << '\n'
    << "max_frequency_residual " << rep.max_freq_residual << '\n'
    << "max_conservation_error " << rep.max_conservation_error << '\n'
    << "undefined_vertices " << field.num_undefined() << '\n'
    << "singularities " << sing.clusters.size() << '\n'
    << "index_sum " << sing.index_sum() << '\n';

  if (field.num_undefined() > 0) {
    d << "graph_area nan\n";
  } else {
    const GraphArea ga = graph_area(mesh, p.atlas(), p.ops().fem, field, rc.radius);
    d << "graph_area " << ga.area << '\n' << "graph_base_area " << ga.base_area << '\n';
  }
  if (field.num_undefined() == 0 && !sing.clusters.empty()) {
    std::vector<Eigen::Vector3d> centers;
    for (const Singularity& c : sing.clusters) centers.push_back(c.position);
    const double R = 2 * mean_edge_length(mesh);
    const GraphArea gx = graph_area(mesh, p.atlas(), p.ops().fem, field, rc.radius, centers, R, true);
    d << "graph_area_excluded " << gx.area << '\n'
      << "graph_area_helicoid " << gx.helicoid << '\n'
      << "graph_area_excluded_faces " << gx.excluded_faces << '\n';
  }

  const std::vector<double> grid = default_cdf_grid();
  std::vector<double> cdf;
  if (field.num_undefined() < mesh.num_vertices() && p.config().radius > 0) {
    try {
      cdf = concentration_cdf(p, s, field, grid);
    } catch (const std::exception& e) {
      log << "warning: " << e.what() << '\n';
    }
  }
  d << "cdf_rows " << cdf.size() << '\n';
  for (std::size_t i = 0; i < cdf.size(); ++i) d << "cdf " << grid[i] << ' ' << cdf[i] << '\n';

  const Eigen::VectorXd w2 = fiber_w2(p, s, field);
  d << "w2_rows " << w2.size() << '\n';
  for (Eigen::Index v = 0; v < w2.size(); ++v) d << "w2 " << v << ' ' << w2[v] << '\n';

  std::vector<double> hp, hd, hpn, hdn;
  for (const Residuals& r : rep.history) {
    hp.push_back(r.primal_mu);
    hd.push_back(r.dual_mu);
    hpn.push_back(r.primal_nu);
    hdn.push_back(r.dual_nu);
  }
  write_series(d, "history_primal_sigma", hp);
  write_series(d, "history_dual_sigma", hd);
  write_series(d, "history_primal_gamma", hpn);
  write_series(d, "history_dual_gamma", hdn);
  write_series(d, "history_kkt", rep.kkt_history);
  if (rc.deterministic) {
    std::ofstream t = open_out((out / "timings.txt").string());
    write_timings(t, rep.times, rep.wall_time);
  } else {
    write_timings(d, rep.times, rep.wall_time);
  }

  log << "minsec: " << rep.iterations << " iterations, " << (rep.converged ? "converged" : "iteration cap reached")
      << ", objective " << rep.objective.total() << ", " << sing.clusters.size() << " singularities\n";
  return rep.converged ? exit_converged : exit_max_iters;
}

int run_reduced(const RunConfig& rc, const TriMesh& mesh, const std::filesystem::path& out, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const TransportAtlas atlas = build_transport(mesh);
  const LinearFem fem = assemble_linear_fem(mesh, atlas);
  const CrouzeixRaviart cr = assemble_cr(mesh, atlas, fem);
  const double ell = 2 * std::numbers::pi * rc.radius;
  ReducedConfig cfg;
  cfg.lambda_eff = 2 * rc.lambda / (ell * ell);
  cfg.nu = rc.nu;
  cfg.epsilon = rc.epsilon;
  cfg.max_iters = rc.max_iters;
  const ReducedSolution sol = solve_reduced(cr, make_kappa_bar(mesh, atlas, rc.degree), cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const SingularitySet sing = extract_singularities(mesh, sol.gamma, cr.mass, rc.degree);
  write_singularities((out / "singularities.txt").string(), sing);
  write_gamma((out / "gamma.txt").string(), mesh, sol.gamma);
  std::ofstream d = open_out((out / "diagnostics.txt").string());
  d << "mode reduced\n"
    << "converged " << (sol.converged ? 1 : 0) << '\n'
    << "iterations " << sol.iterations << '\n'
    << "lambda_eff " << cfg.lambda_eff << '\n'
    << "objective " << sol.objective << '\n'
    << "feasibility " << sol.feasibility << '\n'
    << "gamma_total " << cr.mass.dot(sol.gamma) << '\n'
    << "boundary_flux " << (cr.L * sol.phi).sum() << '\n'
    << "singularities " << sing.clusters.size() << '\n'
    << "index_sum " << sing.index_sum() << '\n';
  write_series(d, "history_primal", sol.primal_history);
  write_series(d, "history_dual", sol.dual_history);
  if (rc.deterministic) {
    std::ofstream t = open_out((out / "timings.txt").string());
    t << "timing wall " << wall << '\n';
  } else {
    d << "timing wall " << wall << '\n';
  }
  log << "reduced: " << sol.iterations << " iterations, " << (sol.converged ? "converged" : "iteration cap reached")
      << ", " << sing.clusters.size() << " cones\n";
  return sol.converged ? exit_converged : exit_max_iters;
}

int run_baseline(const RunConfig& rc, const TriMesh& mesh, const std::filesystem::path& out, std::ostream& log) {
  const TransportAtlas atlas = build_transport(mesh);
  const BaselineField b = baseline_smoothest_field(mesh, atlas, rc.degree, rc.max_iters);
  write_field((out / "field.txt").string(), b.field);
  write_frames((out / "frames.txt").string(), atlas);
  log << "baseline: eigenvalue " << b.eigenvalue << " after " << b.iterations << " iterations\n";
  return b.residual < 1e-6 ? exit_converged : exit_max_iters;
}

}  // namespace

std::vector<int> read_mask(const TriMesh& mesh, const std::string& path) {
  std::ifstream in = open_in(path, "mask");
  std::set<int> ids;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_comment(line);
    if (blank(line)) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      int v = -1;
      if (!(ls >> v)) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'v index'");
      check_vertex(mesh, v, path, lineno);
      for (int c : mesh.vertex_corners(v)) {
        const int f = c / 3;
        for (int i = 0; i < 3; ++i) {
          const int e = mesh.face_edge(f, i);
          const Edge& E = mesh.edge(e);
          if ((E.v0 == v || E.v1 == v) && mesh.interior_index(e) >= 0) ids.insert(mesh.interior_index(e));
        }
      }
    } else if (tag == "e") {
      int a = -1, b = -1;
      if (!(ls >> a >> b)) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'e a b'");
      check_vertex(mesh, a, path, lineno);
      check_vertex(mesh, b, path, lineno);
      const int e = find_edge(mesh, a, b);
      if (e < 0)
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": no edge between " + std::to_string(a) +
                                 " and " + std::to_string(b));
      if (mesh.interior_index(e) >= 0) ids.insert(mesh.interior_index(e));
    } else {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown record '" + tag + "'");
    }
  }
  return {ids.begin(), ids.end()};
}

Eigen::VectorXd read_lambda_field(const TriMesh& mesh, const std::string& path, double fallback) {
  std::ifstream in = open_in(path, "lambda field");
  Eigen::VectorXd lv = Eigen::VectorXd::Constant(mesh.num_vertices(), fallback);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_comment(line);
    if (blank(line)) continue;
    std::istringstream ls(line);
    int v = -1;
    double x = 0;
    if (!(ls >> v >> x)) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'index lambda'");
    check_vertex(mesh, v, path, lineno);
    if (!(x >= 0)) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": lambda must be nonnegative");
    lv[v] = x;
  }
  Eigen::VectorXd out(mesh.num_interior_edges());
  for (int i = 0; i < mesh.num_interior_edges(); ++i) {
    const Edge& e = mesh.edge(mesh.interior_edges()[i]);
    out[i] = 0.5 * (lv[e.v0] + lv[e.v1]);
  }
  return out;
}

std::vector<FieldRecord> read_field_file(const std::string& path) {
  std::ifstream in = open_in(path, "field file");
  std::vector<FieldRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    std::istringstream ls(line);
    FieldRecord r;
    std::string angle;
    if (!(ls >> r.vertex >> angle >> r.confidence)) throw std::runtime_error(path + ": malformed field line");
    r.angle = std::stod(angle);
    out.push_back(r);
  }
  return out;
}

std::vector<Frame> read_frames_file(const std::string& path) {
  std::ifstream in = open_in(path, "frames file");
  std::vector<Frame> out;
  std::string line;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    std::istringstream ls(line);
    int v = -1;
    Frame f;
    if (!(ls >> v >> f.e1.x() >> f.e1.y() >> f.e1.z() >> f.e2.x() >> f.e2.y() >> f.e2.z()))
      throw std::runtime_error(path + ": malformed frame line");
    out.push_back(f);
  }
  return out;
}

void write_field(const std::string& path, const ExtractedField& field) {
  std::ofstream out = open_out(path);
  for (Eigen::Index v = 0; v < field.z.size(); ++v) {
    out << v << ' ';
    if (field.defined[v]) out << field.angle[v];
    else out << "nan";
    out << ' ' << field.confidence[v] << '\n';
  }
}

void write_frames(const std::string& path, const TransportAtlas& atlas) {
  std::ofstream out = open_out(path);
  for (std::size_t v = 0; v < atlas.vertex_frames.size(); ++v) {
    const Frame& f = atlas.vertex_frames[v];
    out << v << ' ' << f.e1.x() << ' ' << f.e1.y() << ' ' << f.e1.z() << ' ' << f.e2.x() << ' ' << f.e2.y() << ' '
        << f.e2.z() << '\n';
  }
}

void write_singularities(const std::string& path, const SingularitySet& s) {
  std::ofstream out = open_out(path);
  for (const Singularity& c : s.clusters)
    out << c.position.x() << ' ' << c.position.y() << ' ' << c.position.z() << ' ' << c.index << ' ' << c.residual
        << '\n';
}

void write_gamma(const std::string& path, const TriMesh& mesh, const Eigen::VectorXd& gamma) {
  std::ofstream out = open_out(path);
  for (int i = 0; i < mesh.num_interior_edges(); ++i) {
    const Edge& e = mesh.edge(mesh.interior_edges()[i]);
    out << i << ' ' << e.v0 << ' ' << e.v1 << ' ' << gamma[i] << '\n';
  }
}

void write_current(const std::string& path, const TriMesh& mesh, const kernels::CovectorSamples& sigma,
                   double radius) {
  std::ofstream out = open_out(path);
  const double inv_r2 = 1.0 / (radius * radius);
  for (Eigen::Index c = 0; c < sigma.rows(); ++c) {
    out << c << ' ' << mesh.corner_vertex(static_cast<int>(c));
    for (Eigen::Index m = 0; m < sigma.cols(); ++m) {
      const double h2 = sigma.hx(c, m) * sigma.hx(c, m) + sigma.hy(c, m) * sigma.hy(c, m);
      out << ' ' << std::sqrt(h2 + inv_r2 * sigma.v(c, m) * sigma.v(c, m));
    }
    out << '\n';
  }
}

int run(const RunConfig& config, std::ostream& log) {
  validate(config);
  const TriMesh mesh = load_mesh(config.mesh);
  const std::filesystem::path out(config.out);
  std::filesystem::create_directories(out);
  switch (config.mode) {
    case Mode::minsec: return run_minsec(config, mesh, out, log);
    case Mode::reduced: return run_reduced(config, mesh, out, log);
    case Mode::baseline: return run_baseline(config, mesh, out, log);
  }
  return exit_error;
}

}  // namespace minsec
