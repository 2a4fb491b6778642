#include "minsec/mesh.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace minsec {

namespace {

int parse_index(const std::string& token, int nv, const std::string& where) {
  const std::string head = token.substr(0, token.find('/'));
  int idx = 0;
  try {
    std::size_t used = 0;
    idx = std::stoi(head, &used);
    if (used != head.size()) throw std::invalid_argument(head);
  } catch (const std::exception&) {
    throw MeshError(where + ": bad face index '" + token + "'");
  }
  if (idx > 0) return idx - 1;
  if (idx < 0) return nv + idx;
  throw MeshError(where + ": face index 0 is invalid");
}

}  // namespace

TriMesh parse_obj(const std::string& text, const std::string& source, bool require_boundary) {
  std::vector<Eigen::Vector3d> positions;
  std::vector<std::array<int, 3>> faces;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    const std::string where = source + ":" + std::to_string(lineno);
    if (tag == "v") {
      Eigen::Vector3d p;
      if (!(ls >> p.x() >> p.y() >> p.z())) throw MeshError(where + ": malformed vertex record");
      positions.push_back(p);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) idx.push_back(parse_index(tok, static_cast<int>(positions.size()), where));
      if (idx.size() != 3)
        throw MeshError(where + ": face " + std::to_string(faces.size()) + " has " +
                        std::to_string(idx.size()) + " vertices (only triangles are supported)");
      faces.push_back({idx[0], idx[1], idx[2]});
    }
    // vt, vn, g, o, s, usemtl, ... carry nothing we need.
  }
  return TriMesh(std::move(positions), std::move(faces), require_boundary);
}

TriMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("mesh not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_obj(ss.str(), path);
}

void write_obj(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(17);
  for (const auto& p : mesh.positions()) out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  for (const auto& f : mesh.faces()) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

}  // namespace minsec
