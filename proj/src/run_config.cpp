#include "minsec/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace minsec {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + v + "'");
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected an integer, got '" + v + "'");
}

bool to_bool(const std::string& key, std::string v) {
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

}  // namespace

Mode parse_mode(const std::string& s) {
  if (s == "minsec") return Mode::minsec;
  if (s == "reduced") return Mode::reduced;
  if (s == "baseline") return Mode::baseline;
  throw ConfigError("mode: unknown mode '" + s + "' (expected minsec, reduced or baseline)");
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::minsec: return "minsec";
    case Mode::reduced: return "reduced";
    case Mode::baseline: return "baseline";
  }
  return "?";
}

RunConfig parse_config(const std::string& text, RunConfig c, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    if (key == "mesh") c.mesh = v;
    else if (key == "mode") c.mode = parse_mode(v);
    else if (key == "degree") c.degree = to_int(key, v);
    else if (key == "lambda") c.lambda = to_double(key, v);
    else if (key == "lambda_field") c.lambda_field = v;
    else if (key == "radius") c.radius = to_double(key, v);
    else if (key == "N" || key == "fiber_n") c.N = to_int(key, v);
    else if (key == "epsilon") c.epsilon = to_double(key, v);
    else if (key == "max_iters") c.max_iters = to_int(key, v);
    else if (key == "mu") c.mu = to_double(key, v);
    else if (key == "nu") c.nu = to_double(key, v);
    else if (key == "mask") c.mask = v;
    else if (key == "boundary") c.boundary = v;
    else if (key == "out") c.out = v;
    else if (key == "emit_current") c.emit_current = to_bool(key, v);
    else if (key == "threads") c.threads = to_int(key, v);
    else if (key == "deterministic") c.deterministic = to_bool(key, v);
    else throw ConfigError(source + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return c;
}

void validate(const RunConfig& c) {
  if (c.mesh.empty()) throw ConfigError("mesh: no mesh path given");
  if (c.degree < 1) throw ConfigError("degree must be at least 1");
  if (!(c.lambda >= 0)) throw ConfigError("lambda must be nonnegative");
  if (!(c.radius > 0)) throw ConfigError("radius must be positive");
  if (c.N < 8 || c.N % 2 != 0) throw ConfigError("N must be even and ≥ 8");
  if (!(c.epsilon > 0)) throw ConfigError("epsilon must be positive");
  if (c.max_iters < 1) throw ConfigError("max_iters must be positive");
  if (!(c.mu > 0)) throw ConfigError("mu must be positive");
  if (!(c.nu > 0)) throw ConfigError("nu must be positive");
  if (c.threads < 0) throw ConfigError("threads must be nonnegative");
  if (c.out.empty()) throw ConfigError("out: no output directory given");
  if (c.boundary.empty()) throw ConfigError("boundary: expected 'tangent' or an angle file");
}

RunConfig validate_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig c = parse_config(ss.str(), std::move(base), path);
  validate(c);
  return c;
}

}  // namespace minsec
