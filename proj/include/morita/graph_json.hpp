#pragma once

#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "morita/stable_graph.hpp"

namespace morita {

/// On-disk graph format:
/// {"vertices":[{"id":"v1","genus":1},...],
///  "edges":[{"id":"e1","tail":"v1","head":"v2","multiplicity":1},...],
///  "automorphism":{"vertices":{...},"edges":{...},"reversed_edges":[...]}}
/// The automorphism block and multiplicities are optional.
struct GraphFile {
  StableGraph graph;
  std::optional<GraphAutomorphism> automorphism;
};

inline GraphFile graph_from_json(const nlohmann::json& j) {
  GraphFile out;
  try {
    if (!j.contains("vertices")) throw input_error("missing vertices");
    for (const auto& v : j.at("vertices")) {
      Vertex vx;
      vx.id = v.at("id").get<std::string>();
      vx.genus = v.value("genus", 0L);
      out.graph.vertices.push_back(vx);
    }
    for (const auto& e : j.value("edges", nlohmann::json::array())) {
      Edge ed;
      ed.id = e.at("id").get<std::string>();
      ed.tail = e.at("tail").get<std::string>();
      ed.head = e.at("head").get<std::string>();
      ed.multiplicity = e.value("multiplicity", 1L);
      out.graph.edges.push_back(ed);
    }
    if (j.contains("automorphism")) {
      const auto& a = j.at("automorphism");
      GraphAutomorphism s;
      for (const auto& [k, v] : a.value("vertices", nlohmann::json::object())
                                    .items())
        s.vertex_map[k] = v.get<std::string>();
      for (const auto& [k, v] :
           a.value("edges", nlohmann::json::object()).items())
        s.edge_map[k] = v.get<std::string>();
      for (const auto& r :
           a.value("reversed_edges", nlohmann::json::array()))
        s.reversed_edges.insert(r.get<std::string>());
      out.automorphism = std::move(s);
    }
  } catch (const nlohmann::json::exception& ex) {
    throw input_error(std::string("malformed graph file: ") + ex.what());
  }
  return out;
}

inline GraphFile load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw input_error(std::string("bad JSON in ") + path + ": " + ex.what());
  }
  return graph_from_json(j);
}

inline nlohmann::json graph_to_json(const GraphFile& gf) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (const auto& v : gf.graph.vertices)
    j["vertices"].push_back({{"id", v.id}, {"genus", v.genus}});
  j["edges"] = nlohmann::json::array();
  for (const auto& e : gf.graph.edges)
    j["edges"].push_back({{"id", e.id},
                          {"tail", e.tail},
                          {"head", e.head},
                          {"multiplicity", e.multiplicity}});
  if (gf.automorphism) {
    nlohmann::json a;
    a["vertices"] = nlohmann::json::object();
    for (const auto& [k, v] : gf.automorphism->vertex_map) a["vertices"][k] = v;
    a["edges"] = nlohmann::json::object();
    for (const auto& [k, v] : gf.automorphism->edge_map) a["edges"][k] = v;
    a["reversed_edges"] = nlohmann::json::array();
    for (const auto& r : gf.automorphism->reversed_edges)
      a["reversed_edges"].push_back(r);
    j["automorphism"] = a;
  }
  return j;
}

}  // namespace morita
