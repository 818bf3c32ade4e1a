#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "morita/abelian.hpp"
#include "morita/stable_graph.hpp"

namespace morita {

/// Integer homology of the surface obtained by inflating a stable graph:
/// subsurfaces at vertices, gluing circles along edges.
///
/// The basis comes in three blocks. For each vertex handle there is a
/// symplectic pair (a, b); for each non-tree edge e there is the class of its
/// gluing circle (the vanishing block) and a dual cycle class traversing the
/// fundamental cycle of e (the cycle block). Circle classes of tree edges are
/// linear combinations of the vanishing generators, obtained by eliminating
/// the vertex boundary relations from the leaves inward.
class HomologyModel {
 public:
  explicit HomologyModel(const StableGraph& input) : g_(input.sorted()) {
    ValidationReport rep = validate_stable(g_);
    if (!rep.valid)
      throw input_error("invalid stable graph: " + rep.violations.front());
    genus_ = rep.genus;

    std::size_t nv = g_.vertices.size(), ne = g_.edges.size();
    for (std::size_t i = 0; i < nv; ++i) vidx_[g_.vertices[i].id] = i;
    for (std::size_t i = 0; i < ne; ++i) eidx_[g_.edges[i].id] = i;

    build_tree();
    for (std::size_t e = 0; e < ne; ++e)
      if (!tree_edge_[e]) nontree_.push_back(e);

    for (std::size_t v = 0; v < nv; ++v)
      for (long k = 0; k < g_.vertices[v].genus; ++k)
        pairs_.push_back({v, k});

    build_cycles();
    build_expansions();
  }

  const StableGraph& graph() const { return g_; }
  long genus() const { return genus_; }
  std::size_t rank() const { return 2 * pairs_.size() + 2 * nontree_.size(); }
  std::size_t handle_pair_count() const { return pairs_.size(); }
  std::size_t cycle_rank() const { return nontree_.size(); }

  std::size_t vertex_of_pair(std::size_t p) const { return pairs_[p].vertex; }
  long slot_of_pair(std::size_t p) const { return pairs_[p].k; }
  std::size_t a_index(std::size_t p) const { return 2 * p; }
  std::size_t b_index(std::size_t p) const { return 2 * p + 1; }
  std::size_t vanishing_index(std::size_t t) const {
    return 2 * pairs_.size() + t;
  }
  std::size_t cycle_index(std::size_t t) const {
    return 2 * pairs_.size() + nontree_.size() + t;
  }
  std::size_t nontree_edge(std::size_t t) const { return nontree_[t]; }
  bool in_tree(std::size_t e) const { return tree_edge_[e]; }

  std::size_t vertex_index(const std::string& id) const {
    auto it = vidx_.find(id);
    if (it == vidx_.end()) throw input_error("unknown vertex id: " + id);
    return it->second;
  }
  std::size_t edge_index(const std::string& id) const {
    auto it = eidx_.find(id);
    if (it == eidx_.end()) throw input_error("unknown edge id: " + id);
    return it->second;
  }

  /// Circle class of edge e in the vanishing block (length = cycle_rank()).
  const IntVec& vanishing_expansion(std::size_t e) const {
    return expansion_[e];
  }

  /// Same, embedded into full-rank coordinates.
  IntVec vanishing_expansion_full(std::size_t e) const {
    IntVec v(rank());
    for (std::size_t t = 0; t < nontree_.size(); ++t)
      v[vanishing_index(t)] = expansion_[e][t];
    return v;
  }

  /// Signed incidence of each edge in the fundamental cycle of the t-th
  /// non-tree edge (+1 where the cycle runs tail to head).
  const std::vector<long>& fundamental_cycle(std::size_t t) const {
    return fcycle_[t];
  }

  /// Intersection pairing of a basis element with the circle class of edge e.
  /// Only cycle-block generators meet the circles.
  Int pairing(std::size_t basis_index, std::size_t e) const {
    std::size_t c0 = 2 * pairs_.size() + nontree_.size();
    if (basis_index < c0) return 0;
    return fcycle_[basis_index - c0][e];
  }

  /// Signed edge sequence of the tree path between two vertices; +1 entries
  /// traverse tail to head.
  std::vector<std::pair<std::size_t, int>> tree_path(std::size_t from,
                                                     std::size_t to) const {
    std::vector<std::pair<std::size_t, int>> up, down;
    std::size_t a = from, b = to;
    while (depth_[a] > depth_[b]) {
      up.push_back({parent_edge_[a], step_sign(a)});
      a = parent_vertex_[a];
    }
    while (depth_[b] > depth_[a]) {
      down.push_back({parent_edge_[b], -step_sign(b)});
      b = parent_vertex_[b];
    }
    while (a != b) {
      up.push_back({parent_edge_[a], step_sign(a)});
      down.push_back({parent_edge_[b], -step_sign(b)});
      a = parent_vertex_[a];
      b = parent_vertex_[b];
    }
    std::reverse(down.begin(), down.end());
    up.insert(up.end(), down.begin(), down.end());
    return up;
  }

 private:
  struct HandlePair {
    std::size_t vertex;
    long k;
  };

  // sign of the step child -> parent against the edge orientation
  int step_sign(std::size_t child) const {
    const Edge& e = g_.edges[parent_edge_[child]];
    return vidx_.at(e.tail) == child ? 1 : -1;
  }

  void build_tree() {
    std::size_t nv = g_.vertices.size(), ne = g_.edges.size();
    tree_edge_.assign(ne, false);
    parent_vertex_.assign(nv, 0);
    parent_edge_.assign(nv, 0);
    depth_.assign(nv, 0);
    std::vector<char> seen(nv, 0);
    std::deque<std::size_t> queue = {0};
    seen[0] = 1;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t e = 0; e < ne; ++e) {
        std::size_t t = vidx_.at(g_.edges[e].tail);
        std::size_t h = vidx_.at(g_.edges[e].head);
        std::size_t w;
        if (t == v && !seen[h])
          w = h;
        else if (h == v && !seen[t])
          w = t;
        else
          continue;
        seen[w] = 1;
        tree_edge_[e] = true;
        parent_vertex_[w] = v;
        parent_edge_[w] = e;
        depth_[w] = depth_[v] + 1;
        queue.push_back(w);
      }
    }
  }

  void build_cycles() {
    std::size_t ne = g_.edges.size();
    for (std::size_t e : nontree_) {
      std::vector<long> c(ne, 0);
      c[e] = 1;
      std::size_t t = vidx_.at(g_.edges[e].tail);
      std::size_t h = vidx_.at(g_.edges[e].head);
      for (const auto& [pe, sign] : tree_path(h, t)) c[pe] += sign;
      fcycle_.push_back(std::move(c));
    }
  }

  void build_expansions() {
    std::size_t nv = g_.vertices.size(), ne = g_.edges.size();
    std::size_t b1 = nontree_.size();
    expansion_.assign(ne, IntVec(b1));
    for (std::size_t t = 0; t < b1; ++t) expansion_[nontree_[t]][t] = 1;

    // peel tree leaves; at a leaf the boundary relation determines the class
    // of its last tree edge from the already-known ones
    std::vector<long> tdeg(nv, 0);
    for (std::size_t e = 0; e < ne; ++e)
      if (tree_edge_[e]) {
        ++tdeg[vidx_.at(g_.edges[e].tail)];
        ++tdeg[vidx_.at(g_.edges[e].head)];
      }
    std::vector<char> done_edge(ne, 0), done_vertex(nv, 0);
    for (std::size_t round = 0; round + 1 < nv; ++round) {
      std::size_t leaf = nv;
      for (std::size_t v = 0; v < nv; ++v)
        if (!done_vertex[v] && tdeg[v] == 1) {
          leaf = v;
          break;
        }
      if (leaf == nv) break;  // single-vertex graph
      std::size_t pend = ne;
      IntVec acc(b1);
      int psign = 0;
      for (std::size_t e = 0; e < ne; ++e) {
        std::size_t t = vidx_.at(g_.edges[e].tail);
        std::size_t h = vidx_.at(g_.edges[e].head);
        if (t != leaf && h != leaf) continue;
        if (t == leaf && h == leaf) continue;  // loops cancel
        int sign = (t == leaf) ? 1 : -1;
        if (tree_edge_[e] && !done_edge[e]) {
          pend = e;
          psign = sign;
        } else {
          for (std::size_t i = 0; i < b1; ++i)
            acc[i] += sign * expansion_[e][i];
        }
      }
      for (std::size_t i = 0; i < b1; ++i)
        expansion_[pend][i] = -psign * acc[i];
      done_edge[pend] = 1;
      done_vertex[leaf] = 1;
      --tdeg[leaf];
      std::size_t other = vidx_.at(g_.edges[pend].tail) == leaf
                              ? vidx_.at(g_.edges[pend].head)
                              : vidx_.at(g_.edges[pend].tail);
      --tdeg[other];
    }
  }

  StableGraph g_;
  long genus_ = 0;
  std::map<std::string, std::size_t> vidx_, eidx_;
  std::vector<bool> tree_edge_;
  std::vector<std::size_t> parent_vertex_, parent_edge_;
  std::vector<long> depth_;
  std::vector<std::size_t> nontree_;
  std::vector<HandlePair> pairs_;
  std::vector<std::vector<long>> fcycle_;
  std::vector<IntVec> expansion_;
};

inline HomologyModel homology_model(const StableGraph& g) {
  return HomologyModel(g);
}

/// Homology action of the multitwist about all gluing circles:
/// x -> x + sum_e l(e) <x, [l_e]> [l_e].
inline IntMatrix twist_matrix(const HomologyModel& m) {
  IntMatrix t = IntMatrix::identity(m.rank());
  for (std::size_t e = 0; e < m.graph().edges.size(); ++e) {
    Int mult = m.graph().edges[e].multiplicity;
    IntVec le = m.vanishing_expansion_full(e);
    for (std::size_t tt = 0; tt < m.cycle_rank(); ++tt) {
      Int p = m.pairing(m.cycle_index(tt), e);
      if (p == 0) continue;
      Int c = mult * p;
      std::size_t j = m.cycle_index(tt);
      for (std::size_t i = 0; i < m.rank(); ++i) t(i, j) += c * le[i];
    }
  }
  return t;
}

namespace detail {

struct AutomorphismIndices {
  std::vector<std::size_t> vperm, eperm;
  std::vector<int> esign;
};

inline AutomorphismIndices index_automorphism(const HomologyModel& m,
                                              const GraphAutomorphism& s) {
  AutomorphismReport rep = check_automorphism(m.graph(), s);
  if (!rep.valid)
    throw input_error("invalid automorphism: " + rep.violations.front());
  AutomorphismIndices idx;
  const StableGraph& g = m.graph();
  idx.vperm.resize(g.vertices.size());
  idx.eperm.resize(g.edges.size());
  idx.esign.assign(g.edges.size(), 1);
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    idx.vperm[v] = m.vertex_index(s.vertex_map.at(g.vertices[v].id));
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    idx.eperm[e] = m.edge_index(s.edge_map.at(g.edges[e].id));
    if (s.reversed_edges.count(g.edges[e].id)) idx.esign[e] = -1;
  }
  return idx;
}

}  // namespace detail

/// Homology action of the rigid lift of a graph automorphism. Handles follow
/// the vertex permutation slot by slot, circle classes follow the edge
/// permutation with a sign per reversed edge, and each dual cycle generator
/// maps to the expansion of its image cycle in the fundamental-cycle basis
/// with no vanishing-block correction.
inline IntMatrix automorphism_matrix(const HomologyModel& m,
                                     const GraphAutomorphism& s) {
  detail::AutomorphismIndices idx = detail::index_automorphism(m, s);
  const StableGraph& g = m.graph();
  IntMatrix mat(m.rank(), m.rank());

  // handle slot k at v goes to handle slot k at the image vertex
  std::map<std::pair<std::size_t, long>, std::size_t> pair_of;
  for (std::size_t p = 0; p < m.handle_pair_count(); ++p)
    pair_of[{m.vertex_of_pair(p), m.slot_of_pair(p)}] = p;
  for (std::size_t p = 0; p < m.handle_pair_count(); ++p) {
    std::size_t q =
        pair_of.at({idx.vperm[m.vertex_of_pair(p)], m.slot_of_pair(p)});
    mat(m.a_index(q), m.a_index(p)) = 1;
    mat(m.b_index(q), m.b_index(p)) = 1;
  }

  for (std::size_t t = 0; t < m.cycle_rank(); ++t) {
    std::size_t e = m.nontree_edge(t);
    IntVec img = m.vanishing_expansion_full(idx.eperm[e]);
    std::size_t j = m.vanishing_index(t);
    for (std::size_t i = 0; i < m.rank(); ++i)
      mat(i, j) = idx.esign[e] * img[i];
  }

  for (std::size_t t = 0; t < m.cycle_rank(); ++t) {
    std::vector<Int> image_cycle(g.edges.size());
    const std::vector<long>& c = m.fundamental_cycle(t);
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      if (c[e] != 0) image_cycle[idx.eperm[e]] += c[e] * idx.esign[e];
    std::size_t j = m.cycle_index(t);
    for (std::size_t tt = 0; tt < m.cycle_rank(); ++tt)
      mat(m.cycle_index(tt), j) = image_cycle[m.nontree_edge(tt)];
  }
  return mat;
}

/// Circle-class sum along the canonical tree path from the least moved vertex
/// to its image: the homology class of the loop comparing the multitwist with
/// the identity over that path.
inline IntVec o1_class(const HomologyModel& m, const GraphAutomorphism& s) {
  detail::AutomorphismIndices idx = detail::index_automorphism(m, s);
  std::size_t v0 = m.graph().vertices.size();
  for (std::size_t v = 0; v < m.graph().vertices.size(); ++v)
    if (idx.vperm[v] != v) {
      v0 = v;
      break;
    }
  IntVec cls(m.rank());
  if (v0 == m.graph().vertices.size()) return cls;  // identity: empty path
  for (const auto& [e, sign] : m.tree_path(v0, idx.vperm[v0])) {
    Int c = Int(sign) * m.graph().edges[e].multiplicity;
    IntVec le = m.vanishing_expansion_full(e);
    for (std::size_t i = 0; i < m.rank(); ++i) cls[i] += c * le[i];
  }
  return cls;
}

/// Relation lattice of the coinvariants under the group generated by the two
/// given operators: columns of [s - 1 | t - 1].
inline IntMatrix coinvariant_relations(const IntMatrix& s,
                                       const IntMatrix& t) {
  IntMatrix id = IntMatrix::identity(s.rows());
  return hcat(s - id, t - id);
}

/// Order of the primary obstruction class in the coinvariants of homology
/// under the automorphism lift and the multitwist.
inline Order o1_order(const HomologyModel& m, const GraphAutomorphism& s) {
  IntMatrix smat = automorphism_matrix(m, s);
  IntMatrix tmat = twist_matrix(m);
  return cokernel_order_of(coinvariant_relations(smat, tmat), o1_class(m, s));
}

}  // namespace morita
