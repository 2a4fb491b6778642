#include "minsec/extract.hpp"
#include "minsec/fixtures.hpp"
#include "minsec/pipeline.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace minsec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "minsec_test_cli" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Outcome {
  int status = -1;
  std::string err;
};

Outcome cli(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(MINSEC_CLI_PATH) + " " + args + " 2> " + err.string() + " > /dev/null";
  const int raw = std::system(cmd.c_str());
  Outcome o;
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  o.err = slurp(err);
  return o;
}

fs::path write_disk(const fs::path& dir, const TriMesh& m) {
  const fs::path p = dir / "disk.obj";
  write_obj(m, p.string());
  return p;
}

std::vector<std::string> files_in(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

TEST_CASE("config defaults") {
  const RunConfig c = parse_config("# nothing\n\n", {});
  CHECK(c.N == 64);
  CHECK(c.epsilon == 5e-4);
  CHECK(c.mu == 1.0);
  CHECK(c.nu == 1.0);
  CHECK(c.boundary == "tangent");
  CHECK(c.mode == Mode::minsec);

  const fs::path dir = scratch("defaults");
  const fs::path cfg = dir / "empty.cfg";
  std::ofstream(cfg).close();
  RunConfig base;
  base.mesh = "disk.obj";
  const RunConfig v = validate_config(cfg.string(), base);
  CHECK(v.mesh == "disk.obj");
  CHECK(v.N == 64);
  CHECK(v.epsilon == 5e-4);
}

TEST_CASE("config errors name the key") {
  RunConfig base;
  base.mesh = "x.obj";
  CHECK_THROWS_WITH_AS(validate(parse_config("lambda = -1\n", base)), "lambda must be nonnegative", ConfigError);
  CHECK_THROWS_WITH_AS(validate(parse_config("N = 15\n", base)), "N must be even and ≥ 8", ConfigError);
  CHECK_THROWS_WITH_AS(validate(parse_config("N = 6\n", base)), "N must be even and ≥ 8", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("colour = red\n", base), doctest::Contains("unknown key 'colour'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("degree = four\n", base), doctest::Contains("degree"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("mode = fast\n", base), doctest::Contains("mode"), ConfigError);
  CHECK_THROWS_WITH_AS(validate(RunConfig{}), doctest::Contains("mesh"), ConfigError);
  CHECK_THROWS_AS(validate_config("/nonexistent/minsec.cfg", base), ConfigError);
}

TEST_CASE("missing mesh exits nonzero") {
  const fs::path dir = scratch("missing");
  const Outcome o = cli("--mesh /nonexistent/disk.obj --out " + (dir / "out").string(), dir);
  CHECK(o.status != 0);
  CHECK(o.err.find("mesh not found: /nonexistent/disk.obj") != std::string::npos);

  const Outcome bad = cli("--mesh /nonexistent/disk.obj --fiber-n 15", dir);
  CHECK(bad.status != 0);
  CHECK(bad.err.find("N must be even and ≥ 8") != std::string::npos);
}

TEST_CASE("minsec run writes every artifact") {
  const fs::path dir = scratch("minsec");
  const TriMesh m = fixtures::disk(4);
  const fs::path mesh = write_disk(dir, m);
  const fs::path out = dir / "out";
  const Outcome o = cli("--mesh " + mesh.string() +
                            " --mode minsec --degree 4 --lambda 1 --radius 1 --fiber-n 16 --emit-current --out " +
                            out.string(),
                        dir);
  CHECK(o.status == 0);
  CHECK(files_in(out) == std::vector<std::string>{"current.txt", "diagnostics.txt", "field.txt", "frames.txt",
                                                  "gamma.txt", "singularities.txt"});
  const std::string diag = slurp(out / "diagnostics.txt");
  for (const char* key : {"converged 1", "iterations ", "cdf_rows 33", "w2_rows ", "graph_area ", "timing "})
    CHECK(diag.find(key) != std::string::npos);

  // One line per corner with N samples each.
  std::ifstream cur(out / "current.txt");
  std::string line;
  int rows = 0;
  while (std::getline(cur, line)) {
    std::istringstream ls(line);
    int c, v;
    double x;
    int samples = 0;
    ls >> c >> v;
    while (ls >> x) {
      CHECK(x >= 0);
      ++samples;
    }
    CHECK(samples == 16);
    ++rows;
  }
  CHECK(rows == m.num_corners());
  CHECK(read_field_file((out / "field.txt").string()).size() == static_cast<std::size_t>(m.num_vertices()));
}

TEST_CASE("iteration cap gives exit status 2") {
  const fs::path dir = scratch("capped");
  const fs::path mesh = write_disk(dir, fixtures::disk(3));
  const Outcome o = cli("--mesh " + mesh.string() + " --fiber-n 8 --max-iters 3 --out " + (dir / "out").string(), dir);
  CHECK(o.status == 2);
  CHECK(fs::exists(dir / "out" / "diagnostics.txt"));
}

TEST_CASE("reduced run") {
  const fs::path dir = scratch("reduced");
  const fs::path mesh = dir / "cap.obj";
  write_obj(fixtures::spherical_cap(4, 0.8), mesh.string());
  const fs::path out = dir / "out";
  const Outcome o = cli("--mesh " + mesh.string() + " --mode reduced --degree 4 --lambda 0.5 --out " + out.string(), dir);
  CHECK(o.status == 0);
  CHECK(files_in(out) == std::vector<std::string>{"diagnostics.txt", "gamma.txt", "singularities.txt"});
  CHECK(slurp(out / "diagnostics.txt").find("boundary_flux ") != std::string::npos);
}

TEST_CASE("baseline run writes field and frames that round trip") {
  const fs::path dir = scratch("baseline");
  const TriMesh m = fixtures::spherical_cap(4, 0.8);
  const fs::path mesh = dir / "cap.obj";
  write_obj(m, mesh.string());
  const fs::path out = dir / "out";
  const Outcome o = cli("--mesh " + mesh.string() + " --mode baseline --degree 4 --out " + out.string(), dir);
  CHECK(o.status == 0);
  CHECK(files_in(out) == std::vector<std::string>{"field.txt", "frames.txt"});

  const std::vector<FieldRecord> field = read_field_file((out / "field.txt").string());
  const std::vector<Frame> frames = read_frames_file((out / "frames.txt").string());
  REQUIRE(field.size() == static_cast<std::size_t>(m.num_vertices()));
  REQUIRE(frames.size() == static_cast<std::size_t>(m.num_vertices()));

  const TriMesh loaded = load_mesh(mesh.string());
  const TransportAtlas atlas = build_transport(loaded);
  const BaselineField ref = baseline_smoothest_field(loaded, atlas, 4);
  const int d = 4;
  for (int v = 0; v < m.num_vertices(); ++v) {
    CHECK(field[v].vertex == v);
    // Field direction as a 3D vector, then back through the exported frame.
    const Frame& f = frames[v];
    const Eigen::Vector3d u = std::cos(field[v].angle / d) * f.e1 + std::sin(field[v].angle / d) * f.e2;
    const double back = d * std::atan2(u.dot(f.e2), u.dot(f.e1));
    const cdouble z = std::polar(1.0, back);
    CHECK(std::abs(z - ref.field.z[v]) <= 1e-9);
    CHECK((f.e1 - atlas.vertex_frames[v].e1).norm() <= 1e-12);
    CHECK((f.e2 - atlas.vertex_frames[v].e2).norm() <= 1e-12);
  }
}

TEST_CASE("deterministic runs are byte-identical") {
  const fs::path dir = scratch("deterministic");
  const fs::path mesh = write_disk(dir, fixtures::disk(3, 1.0, 0.2));
  std::vector<std::string> contents[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path out = dir / ("out" + std::to_string(run));
    const Outcome o = cli("--mesh " + mesh.string() +
                              " --degree 2 --fiber-n 16 --emit-current --deterministic --threads 4 --out " +
                              out.string(),
                          dir);
    CHECK(o.status == 0);
    CHECK(fs::exists(out / "timings.txt"));
    for (const char* f : {"field.txt", "frames.txt", "singularities.txt", "gamma.txt", "current.txt",
                          "diagnostics.txt"})
      contents[run].push_back(slurp(out / f));
  }
  CHECK(contents[0] == contents[1]);
}

TEST_CASE("config file and flags combine") {
  const fs::path dir = scratch("config");
  const fs::path mesh = write_disk(dir, fixtures::disk(3));
  const fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "mode = baseline\ndegree = 2\nout = " << (dir / "from_config").string() << "\n";
  const Outcome o = cli("--config " + cfg.string() + " --mesh " + mesh.string(), dir);
  CHECK(o.status == 0);
  CHECK(fs::exists(dir / "from_config" / "field.txt"));

  std::ofstream(cfg) << "colour = red\n";
  const Outcome bad = cli("--config " + cfg.string() + " --mesh " + mesh.string(), dir);
  CHECK(bad.status != 0);
  CHECK(bad.err.find("unknown key 'colour'") != std::string::npos);
}
