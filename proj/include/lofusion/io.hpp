#pragma once

// File formats: channel dumps, graph exports (JSON and DOT), circuit and
// pattern JSON. Angles are radians in memory and degrees in files.

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lofusion/fock.hpp"
#include "lofusion/fusion.hpp"
#include "lofusion/graph_state.hpp"
#include "lofusion/mbqc.hpp"

namespace lofusion::io {

using nlohmann::json;

inline double to_degrees(double r) { return r * 180.0 / kPi; }
inline double to_radians(double d) { return d * kPi / 180.0; }

// ------------------------------------------------------------------ channels

inline json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols; ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

inline CMatrix matrix_from_json(const json& j) {
  const std::size_t rows = j.size(), cols = rows ? j.at(0).size() : 0;
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j.at(r).size() != cols) throw std::invalid_argument("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = {j[r][c].at(0).get<double>(), j[r][c].at(1).get<double>()};
  }
  return m;
}

inline json channel_json(const fock::OutcomeChannel& ch) {
  json outcomes = json::array();
  for (const auto& e : ch.entries)
    outcomes.push_back({{"label", e.label},
                        {"probability", e.probability},
                        {"qubit_output", e.qubit_output},
                        {"output_labels", e.output_labels},
                        {"kraus", matrix_json(e.kraus)}});
  return {{"name", ch.name},
          {"input_rails", ch.input_rails},
          {"output_rails", ch.output_rails},
          {"input_labels", ch.input_labels},
          {"completeness_error", ch.completeness_error()},
          {"total_probability", ch.total_probability()},
          {"outcomes", outcomes}};
}

inline fock::OutcomeChannel fusion_channel(FusionOp op, bool number_resolving = true) {
  switch (op) {
    case FusionOp::TypeI: return fock::derive_channel(fock::type_i_circuit(), {0, 1});
    case FusionOp::TypeII: return fock::derive_channel(fock::type_ii_circuit(number_resolving), {0, 1});
    case FusionOp::CzRedundant: return fock::derive_channel(fock::cz_redundant_circuit(number_resolving), {0, 1});
  }
  throw std::invalid_argument("unknown fusion");
}

/// Detection outcomes grouped by fusion outcome and branch, with the merged
/// Kraus operator where the group is pure.
inline json fusion_classes_json(FusionOp op, const fock::OutcomeChannel& ch) {
  std::map<std::pair<FusionKind, int>, std::vector<const fock::ChannelEntry*>> by;
  for (const auto& e : ch.entries) by[classify_detection(op, e.detections)].push_back(&e);
  json out = json::array();
  for (const auto& [key, group] : by) {
    double p = 0;
    json labels = json::array();
    for (const auto* e : group) {
      p += e->probability;
      labels.push_back(e->label);
    }
    json j = {{"kind", kind_name(key.first)}, {"branch", key.second}, {"probability", p}, {"outcomes", labels}};
    const auto merged = fock::merge_proportional(group);
    j["kraus"] = merged ? matrix_json(*merged) : json(nullptr);
    out.push_back(j);
  }
  return out;
}

// -------------------------------------------------------------------- graphs

inline json graph_json(const GraphState& g) {
  if (g.delegated()) throw std::invalid_argument("graph export needs a graph-form state");
  json frames = json::object();
  for (int v : g.vertices()) frames[std::to_string(v)] = {{"x", g.frame(v).x}, {"k", g.frame(v).k}};
  json edges = json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
  return {{"vertices", g.vertices()}, {"edges", edges}, {"frames", frames}, {"groups", g.groups()}};
}

/// Rebuilds a state from vertices, edges, frames and groups. Photon ids are kept.
inline GraphState graph_from_parts(const std::vector<int>& vertices, const std::vector<std::pair<int, int>>& edges,
                                   const std::map<int, VertexFrame>& frames,
                                   const std::vector<std::vector<int>>& groups) {
  const std::set<int> vs(vertices.begin(), vertices.end());
  if (vs.size() != vertices.size()) throw std::invalid_argument("duplicate vertex");
  if (!vs.empty() && *vs.begin() < 0) throw std::invalid_argument("negative vertex id");
  GraphState g;
  const int top = vs.empty() ? -1 : *vs.rbegin();
  for (int v = 0; v <= top; ++v) {
    const auto it = frames.find(v);
    VertexFrame f = it == frames.end() ? VertexFrame{} : it->second;
    if (f.k < 0 || f.k > 3) throw std::invalid_argument("frame phase out of range");
    g.add_bare_vertex(f);
  }
  std::set<int> grouped;
  for (const auto& grp : groups) {
    if (grp.empty()) throw std::invalid_argument("empty group");
    for (int p : grp)
      if (!vs.count(p) || !grouped.insert(p).second) throw std::invalid_argument("bad group member");
    for (std::size_t i = 1; i < grp.size(); ++i) g.merge_groups(g.group_of(grp[0]), g.group_of(grp[i]));
  }
  for (const auto& [a, b] : edges) {
    if (!vs.count(a) || !vs.count(b) || a == b) throw std::invalid_argument("bad edge");
    if (g.group_of(a) == g.group_of(b)) throw std::invalid_argument("bond inside a logical group");
    if (g.has_edge(a, b)) throw std::invalid_argument("duplicate edge");
    g.toggle_edge(a, b);
  }
  for (int v = 0; v <= top; ++v)
    if (!vs.count(v)) g.erase_vertex(v);
  g.validate();
  return g;
}

inline GraphState graph_from_json(const json& j) {
  std::map<int, VertexFrame> frames;
  if (j.contains("frames"))
    for (const auto& [k, f] : j.at("frames").items())
      frames[std::stoi(k)] = {f.at("x").get<bool>(), f.at("k").get<int>()};
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  std::vector<std::vector<int>> groups;
  if (j.contains("groups")) groups = j.at("groups").get<std::vector<std::vector<int>>>();
  return graph_from_parts(j.at("vertices").get<std::vector<int>>(), edges, frames, groups);
}

/// Graphviz text. Frames and groups ride along as node attributes.
inline std::string graph_dot(const GraphState& g) {
  if (g.delegated()) throw std::invalid_argument("graph export needs a graph-form state");
  std::ostringstream os;
  os << "graph cluster {\n";
  for (int v : g.vertices()) {
    const auto& f = g.frame(v);
    os << "  " << v << " [group=" << g.carrier(g.group_of(v)) << ", x=" << f.x << ", k=" << f.k << "];\n";
  }
  for (const auto& [a, b] : g.edges()) os << "  " << a << " -- " << b << ";\n";
  os << "}\n";
  return os.str();
}

inline GraphState graph_from_dot(const std::string& text) {
  static const std::regex node(R"(^\s*(\d+)\s*\[group=(\d+),\s*x=([01]),\s*k=([0-3])\];\s*$)");
  static const std::regex edge(R"(^\s*(\d+)\s*--\s*(\d+);\s*$)");
  std::istringstream in(text);
  std::string line;
  std::vector<int> vertices;
  std::vector<std::pair<int, int>> edges;
  std::map<int, VertexFrame> frames;
  std::map<int, std::vector<int>> groups;
  bool header = false;
  while (std::getline(in, line)) {
    std::smatch m;
    if (std::regex_match(line, m, node)) {
      const int v = std::stoi(m[1]);
      vertices.push_back(v);
      frames[v] = {m[3] == "1", std::stoi(m[4])};
      groups[std::stoi(m[2])].push_back(v);
    } else if (std::regex_match(line, m, edge)) {
      edges.emplace_back(std::stoi(m[1]), std::stoi(m[2]));
    } else if (line.rfind("graph", 0) == 0) {
      header = true;
    } else if (line != "}" && !line.empty()) {
      throw std::invalid_argument("unrecognised graph line: " + line);
    }
  }
  if (!header) throw std::invalid_argument("missing graph header");
  std::vector<std::vector<int>> gs;
  for (auto& [c, mem] : groups) gs.push_back(mem);
  return graph_from_parts(vertices, edges, frames, gs);
}

// ------------------------------------------------------------------ circuits

inline LogicalCircuit circuit_from_json(const json& j) {
  LogicalCircuit c;
  c.qubits = j.at("qubits").get<int>();
  for (const auto& gj : j.at("gates")) {
    Gate g;
    g.kind = gate_from_name(gj.at("gate").get<std::string>());
    if (g.kind == GateKind::CZ) {
      const auto q = gj.at("qubits").get<std::vector<int>>();
      if (q.size() != 2) throw std::invalid_argument("cz takes two qubits");
      g.q0 = q[0];
      g.q1 = q[1];
    } else {
      g.q0 = gj.at("qubit").get<int>();
      g.theta = to_radians(gj.at("angle").get<double>());
    }
    c.gates.push_back(g);
  }
  c.validate();
  return c;
}

inline json circuit_json(const LogicalCircuit& c) {
  json gates = json::array();
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::CZ)
      gates.push_back({{"gate", "cz"}, {"qubits", {g.q0, g.q1}}});
    else
      gates.push_back({{"gate", gate_name(g.kind)}, {"qubit", g.q0}, {"angle", to_degrees(g.theta)}});
  }
  return {{"qubits", c.qubits}, {"gates", gates}};
}

inline json pattern_json(const MeasurementPattern& p) {
  json steps = json::array();
  for (const auto& s : p.steps) {
    json j = {{"vertex", s.vertex}, {"deps", s.sign_deps}};
    if (s.pauli)
      j["basis"] = std::string(1, *s.pauli);
    else
      j["angle"] = to_degrees(s.angle);
    if (s.gate >= 0) j["gate"] = s.gate;
    steps.push_back(j);
  }
  return {{"steps", steps},
          {"outputs", p.outputs},
          {"out_x", p.out_x},
          {"out_z", p.out_z},
          {"hadamard_out", p.hadamard_out}};
}

inline MeasurementPattern pattern_from_json(const json& j) {
  MeasurementPattern p;
  for (const auto& sj : j.at("steps")) {
    PatternStep s;
    s.vertex = sj.at("vertex").get<int>();
    if (sj.contains("basis")) {
      const auto b = sj.at("basis").get<std::string>();
      if (b.size() != 1) throw std::invalid_argument("basis must be X, Y or Z");
      s.pauli = b[0];
    } else {
      s.angle = to_radians(sj.at("angle").get<double>());
    }
    s.sign_deps = sj.value("deps", std::vector<int>{});
    s.gate = sj.value("gate", -1);
    p.steps.push_back(s);
  }
  p.outputs = j.at("outputs").get<std::vector<int>>();
  p.out_x = j.at("out_x").get<std::vector<std::vector<int>>>();
  p.out_z = j.at("out_z").get<std::vector<std::vector<int>>>();
  p.hadamard_out = j.value("hadamard_out", false);
  p.validate();
  return p;
}

}  // namespace lofusion::io
