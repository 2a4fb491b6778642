#include "minsec/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App app{"Directional fields with optimized singularities via minimal sections"};
  std::string mesh, config, mode, lambda_field, mask, boundary, out;
  int degree = 0, fiber_n = 0, max_iters = 0, threads = -1;
  double lambda = 0, radius = 0, epsilon = 0;
  bool emit_current = false, deterministic = false;

  app.add_option("--mesh", mesh, "Input OBJ mesh with boundary");
  app.add_option("--config", config, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--mode", mode, "minsec, reduced or baseline");
  app.add_option("--degree", degree, "Field degree d");
  app.add_option("--lambda", lambda, "Singularity weight");
  app.add_option("--lambda-field", lambda_field, "Per-vertex lambda file");
  app.add_option("--radius", radius, "Fiber radius r");
  app.add_option("--fiber-n", fiber_n, "Fiber samples N (even, >= 8)");
  app.add_option("--epsilon", epsilon, "Residual tolerance");
  app.add_option("--max-iters", max_iters, "Iteration cap");
  app.add_option("--mask", mask, "Masked vertices/edges file");
  app.add_option("--boundary", boundary, "'tangent' or a boundary angle file");
  app.add_option("--out", out, "Output directory");
  app.add_flag("--emit-current", emit_current, "Write the sampled current");
  app.add_option("--threads", threads, "Thread count (default: MINSEC_THREADS or all)");
  app.add_flag("--deterministic", deterministic, "Single thread; timings go to a separate file");
  CLI11_PARSE(app, argc, argv);

  try {
    minsec::RunConfig rc;
    if (!config.empty()) {
      std::ifstream in(config);
      std::stringstream ss;
      ss << in.rdbuf();
      rc = minsec::parse_config(ss.str(), rc, config);
    }
    if (app.count("--mesh")) rc.mesh = mesh;
    if (app.count("--mode")) rc.mode = minsec::parse_mode(mode);
    if (app.count("--degree")) rc.degree = degree;
    if (app.count("--lambda")) rc.lambda = lambda;
    if (app.count("--lambda-field")) rc.lambda_field = lambda_field;
    if (app.count("--radius")) rc.radius = radius;
    if (app.count("--fiber-n")) rc.N = fiber_n;
    if (app.count("--epsilon")) rc.epsilon = epsilon;
    if (app.count("--max-iters")) rc.max_iters = max_iters;
    if (app.count("--mask")) rc.mask = mask;
    if (app.count("--boundary")) rc.boundary = boundary;
    if (app.count("--out")) rc.out = out;
    if (emit_current) rc.emit_current = true;
    if (deterministic) rc.deterministic = true;
    if (app.count("--threads")) {
      rc.threads = threads;
    } else if (const char* env = std::getenv("MINSEC_THREADS")) {
      rc.threads = std::atoi(env);
    }
    minsec::validate(rc);
    if (rc.deterministic) rc.threads = 1;
    if (rc.threads > 0) minsec::kernels::set_threads(rc.threads);
    return minsec::run(rc, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return minsec::exit_error;
  }
}
