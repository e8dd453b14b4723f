#pragma once

// Lattice spec file format: a JSON document with fields
//   d        positive integer, the lattice dimension
//   offsets  array of integer arrays (each of length d)
//   weights  array of reals, parallel to offsets
// Validation is delegated to build_lattice_spec, so file input obeys the
// same rules as programmatic construction.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "latgram/lattice.hpp"

namespace latgram {

inline LatticeSpec lattice_spec_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("lattice spec: invalid JSON: ") + e.what());
  }
  if (!j.contains("d") || !j.contains("offsets") || !j.contains("weights"))
    throw std::invalid_argument("lattice spec: need fields d, offsets, weights");
  const int d = j.at("d").get<int>();
  std::vector<NodeIndex> offsets;
  for (const auto& o : j.at("offsets")) offsets.push_back(o.get<NodeIndex>());
  const auto weights = j.at("weights").get<std::vector<double>>();
  return build_lattice_spec(d, std::move(offsets), weights);
}

inline LatticeSpec load_lattice_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("lattice spec: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return lattice_spec_from_json(buf.str());
}

inline std::string lattice_spec_to_json(const LatticeSpec& spec) {
  nlohmann::json j;
  j["d"] = spec.d;
  j["offsets"] = spec.offsets;
  j["weights"] = spec.weights;
  return j.dump(2);
}

inline void save_lattice_spec(const LatticeSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("lattice spec: cannot write " + path);
  out << lattice_spec_to_json(spec) << "\n";
}

}  // namespace latgram
