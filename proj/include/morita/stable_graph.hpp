#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "morita/intmat.hpp"

namespace morita {

struct Vertex {
  std::string id;
  long genus = 0;
};

struct Edge {
  std::string id;
  std::string tail;
  std::string head;
  long multiplicity = 1;
};

/// Vertex-weighted multigraph with oriented edges and twist multiplicities.
/// Orientation only fixes signs downstream; stability and genus ignore it.
struct StableGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;

  std::optional<std::size_t> vertex_index(const std::string& id) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      if (vertices[i].id == id) return i;
    return std::nullopt;
  }
  std::optional<std::size_t> edge_index(const std::string& id) const {
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i].id == id) return i;
    return std::nullopt;
  }

  /// First Betti number |E| - |V| + 1, valid when connected.
  long betti() const {
    return static_cast<long>(edges.size()) -
           static_cast<long>(vertices.size()) + 1;
  }

  long total_genus() const {
    long g = betti();
    for (const auto& v : vertices) g += v.genus;
    return g;
  }

  bool is_tree() const { return betti() == 0; }

  /// Self-loops count twice.
  long degree(const std::string& vid) const {
    long d = 0;
    for (const auto& e : edges) {
      if (e.tail == vid) ++d;
      if (e.head == vid) ++d;
    }
    return d;
  }

  /// Copy with vertices and edges sorted by id.
  StableGraph sorted() const {
    StableGraph g = *this;
    std::sort(g.vertices.begin(), g.vertices.end(),
              [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
    std::sort(g.edges.begin(), g.edges.end(),
              [](const Edge& a, const Edge& b) { return a.id < b.id; });
    return g;
  }
};

struct ValidationReport {
  bool valid = false;
  long genus = 0;
  std::vector<std::string> violations;
};

inline ValidationReport validate_stable(
    const StableGraph& g, std::optional<long> expected_genus = std::nullopt) {
  ValidationReport rep;
  if (g.vertices.empty()) {
    rep.violations.push_back("graph has no vertices");
    return rep;
  }
  std::set<std::string> vids, eids;
  for (const auto& v : g.vertices) {
    if (!vids.insert(v.id).second)
      rep.violations.push_back("duplicate vertex id: " + v.id);
    if (v.genus < 0)
      rep.violations.push_back("negative genus at vertex " + v.id);
  }
  for (const auto& e : g.edges) {
    if (!eids.insert(e.id).second)
      rep.violations.push_back("duplicate edge id: " + e.id);
    if (!vids.count(e.tail))
      rep.violations.push_back("edge " + e.id + " has unknown tail " + e.tail);
    if (!vids.count(e.head))
      rep.violations.push_back("edge " + e.id + " has unknown head " + e.head);
    if (e.multiplicity < 1)
      rep.violations.push_back("edge " + e.id + " has multiplicity < 1");
  }
  if (!rep.violations.empty()) return rep;

  // connectivity
  std::map<std::string, std::size_t> vidx;
  for (std::size_t i = 0; i < g.vertices.size(); ++i)
    vidx[g.vertices[i].id] = i;
  std::vector<char> seen(g.vertices.size(), 0);
  std::vector<std::size_t> stack = {0};
  seen[0] = 1;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (const auto& e : g.edges) {
      std::size_t t = vidx[e.tail], h = vidx[e.head];
      if (t == v && !seen[h]) seen[h] = 1, stack.push_back(h);
      if (h == v && !seen[t]) seen[t] = 1, stack.push_back(t);
    }
  }
  if (std::count(seen.begin(), seen.end(), 1) !=
      static_cast<long>(g.vertices.size()))
    rep.violations.push_back("graph is not connected");

  for (const auto& v : g.vertices) {
    long d = g.degree(v.id);
    if (v.genus == 0 && d < 3)
      rep.violations.push_back("genus-0 vertex " + v.id + " has degree " +
                               std::to_string(d) + " < 3");
    if (v.genus == 1 && d < 1)
      rep.violations.push_back("genus-1 vertex " + v.id + " has degree 0");
  }

  rep.genus = g.total_genus();
  if (expected_genus && rep.genus != *expected_genus)
    rep.violations.push_back("genus is " + std::to_string(rep.genus) +
                             ", expected " + std::to_string(*expected_genus));
  rep.valid = rep.violations.empty();
  return rep;
}

/// Contract a set of edges. Non-loop contraction merges the endpoints (genera
/// add, the lexicographically least id survives); a loop is deleted and its
/// vertex gains one genus. Total genus is preserved.
inline StableGraph contract_edges(const StableGraph& g,
                                  const std::set<std::string>& edge_ids) {
  for (const auto& id : edge_ids)
    if (!g.edge_index(id)) throw input_error("unknown edge id: " + id);

  std::map<std::string, std::string> rep;  // union-find, min-id representative
  for (const auto& v : g.vertices) rep[v.id] = v.id;
  auto find = [&](std::string x) {
    while (rep[x] != x) x = rep[x];
    return x;
  };
  std::map<std::string, long> genus;
  for (const auto& v : g.vertices) genus[v.id] = v.genus;

  std::vector<std::string> order(edge_ids.begin(), edge_ids.end());
  std::sort(order.begin(), order.end());
  for (const auto& id : order) {
    const Edge& e = g.edges[*g.edge_index(id)];
    std::string a = find(e.tail), b = find(e.head);
    if (a == b) {
      genus[a] += 1;  // loop contraction
    } else {
      std::string lo = std::min(a, b), hi = std::max(a, b);
      rep[hi] = lo;
      genus[lo] += genus[hi];
    }
  }

  StableGraph out;
  for (const auto& v : g.vertices)
    if (find(v.id) == v.id) out.vertices.push_back({v.id, genus[v.id]});
  for (const auto& e : g.edges) {
    if (edge_ids.count(e.id)) continue;
    out.edges.push_back({e.id, find(e.tail), find(e.head), e.multiplicity});
  }
  return out;
}

namespace detail {

// Label-preserving multigraph isomorphism by backtracking over vertices
// partitioned by (genus, degree, loop profile), with edge-multiset checks.
inline std::multiset<long> multiplicities_between(const StableGraph& g,
                                                  const std::string& a,
                                                  const std::string& b) {
  std::multiset<long> m;
  for (const auto& e : g.edges)
    if ((e.tail == a && e.head == b) || (e.tail == b && e.head == a))
      if (a != b || e.tail == e.head) m.insert(e.multiplicity);
  return m;
}

struct VertexKey {
  long genus;
  long degree;
  std::multiset<long> loops;
  std::multiset<long> incident;
  bool operator<(const VertexKey& o) const {
    if (genus != o.genus) return genus < o.genus;
    if (degree != o.degree) return degree < o.degree;
    if (loops != o.loops) return loops < o.loops;
    return incident < o.incident;
  }
  bool operator==(const VertexKey& o) const {
    return genus == o.genus && degree == o.degree && loops == o.loops &&
           incident == o.incident;
  }
};

inline VertexKey vertex_key(const StableGraph& g, const std::string& v) {
  VertexKey k;
  k.genus = 0;
  for (const auto& vx : g.vertices)
    if (vx.id == v) k.genus = vx.genus;
  k.degree = g.degree(v);
  for (const auto& e : g.edges) {
    if (e.tail == v && e.head == v)
      k.loops.insert(e.multiplicity);
    else if (e.tail == v || e.head == v)
      k.incident.insert(e.multiplicity);
  }
  return k;
}

inline bool extend_isomorphism(const StableGraph& a, const StableGraph& b,
                               std::map<std::string, std::string>& phi,
                               std::set<std::string>& used,
                               std::size_t next) {
  if (next == a.vertices.size()) return true;
  const std::string& va = a.vertices[next].id;
  VertexKey ka = vertex_key(a, va);
  for (const auto& vb : b.vertices) {
    if (used.count(vb.id)) continue;
    if (!(ka == vertex_key(b, vb.id))) continue;
    bool ok = true;
    for (const auto& [ua, ub] : phi)
      if (multiplicities_between(a, va, ua) !=
          multiplicities_between(b, vb.id, ub)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    phi[va] = vb.id;
    used.insert(vb.id);
    if (extend_isomorphism(a, b, phi, used, next + 1)) return true;
    phi.erase(va);
    used.erase(vb.id);
  }
  return false;
}

}  // namespace detail

inline bool isomorphic(const StableGraph& a, const StableGraph& b) {
  if (a.vertices.size() != b.vertices.size() ||
      a.edges.size() != b.edges.size())
    return false;
  std::multiset<detail::VertexKey> ka, kb;
  for (const auto& v : a.vertices) ka.insert(detail::vertex_key(a, v.id));
  for (const auto& v : b.vertices) kb.insert(detail::vertex_key(b, v.id));
  if (!(ka == kb)) return false;
  std::map<std::string, std::string> phi;
  std::set<std::string> used;
  return detail::extend_isomorphism(a, b, phi, used, 0);
}

/// True iff `general` is obtained from `special` by contracting some edge set,
/// up to isomorphism.
inline bool specializes_to(const StableGraph& general,
                           const StableGraph& special) {
  if (general.total_genus() != special.total_genus()) return false;
  long k = static_cast<long>(special.edges.size()) -
           static_cast<long>(general.edges.size());
  if (k < 0) return false;
  std::size_t n = special.edges.size();
  std::vector<std::size_t> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  // all k-subsets of the edges of `special`
  for (;;) {
    std::set<std::string> ids;
    for (std::size_t i : pick) ids.insert(special.edges[i].id);
    if (isomorphic(general, contract_edges(special, ids))) return true;
    long i = k - 1;
    while (i >= 0 && pick[i] == n - static_cast<std::size_t>(k - i)) --i;
    if (i < 0) break;
    ++pick[i];
    for (long j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return false;
}

/// Graph automorphism: bijections on vertex and edge ids plus the set of edges
/// whose orientation the map reverses.
struct GraphAutomorphism {
  std::map<std::string, std::string> vertex_map;
  std::map<std::string, std::string> edge_map;
  std::set<std::string> reversed_edges;

  static GraphAutomorphism identity(const StableGraph& g) {
    GraphAutomorphism s;
    for (const auto& v : g.vertices) s.vertex_map[v.id] = v.id;
    for (const auto& e : g.edges) s.edge_map[e.id] = e.id;
    return s;
  }
};

struct AutomorphismReport {
  bool valid = false;
  std::vector<std::string> violations;
  long order = 0;
  std::vector<std::string> fixed_vertices;
  std::vector<std::string> stabilized_edges;
};

inline AutomorphismReport check_automorphism(const StableGraph& g,
                                             const GraphAutomorphism& s) {
  AutomorphismReport rep;
  std::set<std::string> vids, eids, vtargets, etargets;
  for (const auto& v : g.vertices) vids.insert(v.id);
  for (const auto& e : g.edges) eids.insert(e.id);

  for (const auto& id : vids) {
    auto it = s.vertex_map.find(id);
    if (it == s.vertex_map.end()) {
      rep.violations.push_back("vertex " + id + " has no image");
    } else if (!vids.count(it->second)) {
      rep.violations.push_back("vertex image " + it->second + " unknown");
    } else if (!vtargets.insert(it->second).second) {
      rep.violations.push_back("vertex map is not injective at " + it->second);
    }
  }
  for (const auto& id : eids) {
    auto it = s.edge_map.find(id);
    if (it == s.edge_map.end()) {
      rep.violations.push_back("edge " + id + " has no image");
    } else if (!eids.count(it->second)) {
      rep.violations.push_back("edge image " + it->second + " unknown");
    } else if (!etargets.insert(it->second).second) {
      rep.violations.push_back("edge map is not injective at " + it->second);
    }
  }
  for (const auto& id : s.reversed_edges)
    if (!eids.count(id))
      rep.violations.push_back("reversed edge " + id + " unknown");
  if (!rep.violations.empty()) return rep;

  for (const auto& v : g.vertices) {
    const auto& w = g.vertices[*g.vertex_index(s.vertex_map.at(v.id))];
    if (v.genus != w.genus)
      rep.violations.push_back("genus changes along " + v.id + " -> " + w.id);
  }
  for (const auto& e : g.edges) {
    const auto& f = g.edges[*g.edge_index(s.edge_map.at(e.id))];
    if (e.multiplicity != f.multiplicity)
      rep.violations.push_back("multiplicity changes along " + e.id + " -> " +
                               f.id);
    bool rev = s.reversed_edges.count(e.id) > 0;
    const std::string& t = s.vertex_map.at(e.tail);
    const std::string& h = s.vertex_map.at(e.head);
    bool straight = (f.tail == t && f.head == h);
    bool flipped = (f.tail == h && f.head == t);
    if (e.tail == e.head) {
      if (!straight)
        rep.violations.push_back("loop " + e.id + " maps off its vertex");
    } else if (rev ? !flipped : !straight) {
      rep.violations.push_back("incidence broken along edge " + e.id);
    }
  }
  if (!rep.violations.empty()) return rep;
  rep.valid = true;

  for (const auto& v : g.vertices)
    if (s.vertex_map.at(v.id) == v.id) rep.fixed_vertices.push_back(v.id);
  for (const auto& e : g.edges)
    if (s.edge_map.at(e.id) == e.id) rep.stabilized_edges.push_back(e.id);

  // order: lcm of vertex cycles and edge cycles, doubling an edge cycle when
  // the accumulated reversal along the orbit is a flip
  long order = 1;
  auto lcml = [](long a, long b) { return a / std::gcd(a, b) * b; };
  std::set<std::string> seen;
  for (const auto& v : g.vertices) {
    if (seen.count(v.id)) continue;
    long len = 0;
    std::string x = v.id;
    do {
      seen.insert(x);
      x = s.vertex_map.at(x);
      ++len;
    } while (x != v.id);
    order = lcml(order, len);
  }
  seen.clear();
  for (const auto& e : g.edges) {
    if (seen.count(e.id)) continue;
    long len = 0;
    bool flip = false;
    std::string x = e.id;
    do {
      seen.insert(x);
      if (s.reversed_edges.count(x)) flip = !flip;
      x = s.edge_map.at(x);
      ++len;
    } while (x != e.id);
    order = lcml(order, flip ? 2 * len : len);
  }
  rep.order = order;
  return rep;
}

/// True iff the graph is a tree and sigma is an involution fixing no vertex
/// and stabilizing exactly one edge. Orientation flags do not enter: they are
/// sign bookkeeping only.
inline bool tree_involution_check(const StableGraph& g,
                                  const GraphAutomorphism& s) {
  AutomorphismReport rep = check_automorphism(g, s);
  if (!rep.valid) return false;
  if (!validate_stable(g).valid || !g.is_tree()) return false;
  for (const auto& [a, b] : s.vertex_map)
    if (s.vertex_map.at(b) != a) return false;
  for (const auto& [a, b] : s.edge_map)
    if (s.edge_map.at(b) != a) return false;
  return rep.fixed_vertices.empty() && rep.stabilized_edges.size() == 1;
}

}  // namespace morita
