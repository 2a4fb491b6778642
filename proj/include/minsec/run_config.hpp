#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace minsec {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { minsec, reduced, baseline };

struct RunConfig {
  std::string mesh;
  Mode mode = Mode::minsec;
  int degree = 1;
  double lambda = 1.0;
  std::string lambda_field;
  double radius = 1.0;
  int N = 64;
  double epsilon = 5e-4;
  int max_iters = 2000;
  double mu = 1.0;
  double nu = 1.0;
  std::string mask;
  std::string boundary = "tangent";
  std::string out = "out";
  bool emit_current = false;
  int threads = 0;
  bool deterministic = false;
};

Mode parse_mode(const std::string& s);
const char* mode_name(Mode m);

/// Applies "key = value" lines ('#' comments) on top of `base`. Throws
/// ConfigError for unknown keys and malformed values, naming the key.
RunConfig parse_config(const std::string& text, RunConfig base = {}, const std::string& source = "<config>");
/// Range and presence checks; throws ConfigError naming the key.
void validate(const RunConfig& c);
/// Reads, parses and validates a config file.
RunConfig validate_config(const std::string& path, RunConfig base = {});

}  // namespace minsec
