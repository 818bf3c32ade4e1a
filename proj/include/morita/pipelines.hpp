#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morita/homology.hpp"
#include "morita/surfcoh.hpp"

namespace morita {

/// Full output of the primary-obstruction pipeline for one (graph,
/// automorphism) input.
struct O1Report {
  IntVec class_vector;     // in the homology basis of the model
  IntVec invariant_factors;  // of the coinvariants
  Order order = Order::of(1);
};

inline O1Report o1_report(const StableGraph& g, const GraphAutomorphism& s) {
  HomologyModel model(g);
  IntMatrix smat = automorphism_matrix(model, s);
  IntMatrix tmat = twist_matrix(model);
  AbelianPresentation pres(coinvariant_relations(smat, tmat));
  O1Report rep;
  rep.class_vector = o1_class(model, s);
  rep.invariant_factors = pres.invariant_factors();
  rep.order = pres.order_of(rep.class_vector);
  return rep;
}

/// A stable tree doubled across a fixed-point-free involution that stabilizes
/// exactly one edge, together with the nilpotent lifts of the two mapping
/// classes: the pure-swap lift of the involution and the multitwist lift,
/// which is conjugation by a power of the separating boundary word on the far
/// side and the identity on the near side.
struct DoubledTreeModel {
  HomologyModel model;
  GraphAutomorphism sigma;
  long side_genus = 0;                    // genus on each side of the edge
  std::size_t stabilized_edge = 0;        // index in the model's edge order
  Int stabilized_multiplicity = 1;
  std::vector<int> pair_side;             // 1 or 2 per handle pair
  std::vector<std::size_t> pair_partner;  // involution on handle pairs
  NilEndo swap_endo;
  NilEndo twist_endo;
  std::vector<int> boundary_word;  // one copy of the near-side boundary
};

inline DoubledTreeModel build_doubled_tree(const StableGraph& g,
                                           const GraphAutomorphism& s) {
  if (!tree_involution_check(g, s))
    throw hypothesis_error(
        "input is not a tree with a fixed-point-free involution stabilizing "
        "exactly one edge");
  DoubledTreeModel m{HomologyModel(g), s};
  const StableGraph& sorted = m.model.graph();

  AutomorphismReport rep = check_automorphism(sorted, s);
  m.stabilized_edge = m.model.edge_index(rep.stabilized_edges.front());
  m.stabilized_multiplicity = sorted.edges[m.stabilized_edge].multiplicity;

  // side 1 = component of the cut tree containing the least vertex
  std::size_t nv = sorted.vertices.size();
  std::vector<int> side(nv, 0);
  std::vector<std::size_t> stack = {0};
  side[0] = 1;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t e = 0; e < sorted.edges.size(); ++e) {
      if (e == m.stabilized_edge) continue;
      std::size_t t = m.model.vertex_index(sorted.edges[e].tail);
      std::size_t h = m.model.vertex_index(sorted.edges[e].head);
      if (t == v && !side[h]) side[h] = 1, stack.push_back(h);
      if (h == v && !side[t]) side[t] = 1, stack.push_back(t);
    }
  }
  for (auto& x : side)
    if (!x) x = 2;

  long total = m.model.genus();
  if (total % 2 != 0)
    throw crosscheck_error("doubled tree has odd total genus");
  m.side_genus = total / 2;

  std::size_t pairs = m.model.handle_pair_count();
  m.pair_side.resize(pairs);
  m.pair_partner.resize(pairs);
  detail::AutomorphismIndices idx = detail::index_automorphism(m.model, s);
  std::map<std::pair<std::size_t, long>, std::size_t> pair_of;
  for (std::size_t p = 0; p < pairs; ++p)
    pair_of[{m.model.vertex_of_pair(p), m.model.slot_of_pair(p)}] = p;
  for (std::size_t p = 0; p < pairs; ++p) {
    std::size_t v = m.model.vertex_of_pair(p);
    m.pair_side[p] = side[v];
    m.pair_partner[p] = pair_of.at({idx.vperm[v], m.model.slot_of_pair(p)});
    if (m.pair_partner[p] == p)
      throw crosscheck_error("involution fixes a handle pair");
  }

  long gg = total;  // quotient arithmetic runs at the full surface genus
  m.swap_endo.genus = gg;
  m.swap_endo.images.resize(2 * pairs);
  for (std::size_t p = 0; p < pairs; ++p) {
    std::size_t q = m.pair_partner[p];
    m.swap_endo.images[m.model.a_index(p)] =
        NilElement::generator(gg, m.model.a_index(q));
    m.swap_endo.images[m.model.b_index(p)] =
        NilElement::generator(gg, m.model.b_index(q));
  }
  if (!m.swap_endo.relator_ok())
    throw crosscheck_error("swap lift does not kill the relator");
  if (!(m.swap_endo.compose(m.swap_endo) == NilEndo::identity(gg)))
    throw crosscheck_error("swap lift is not an involution");

  for (std::size_t p = 0; p < pairs; ++p)
    if (m.pair_side[p] == 1) {
      int a = static_cast<int>(m.model.a_index(p)) + 1;
      int b = a + 1;
      auto c = commutator_word(a, b);
      m.boundary_word.insert(m.boundary_word.end(), c.begin(), c.end());
    }

  std::vector<int> wpow;
  for (Int i = 0; i < m.stabilized_multiplicity; ++i)
    wpow.insert(wpow.end(), m.boundary_word.begin(), m.boundary_word.end());
  NilElement w = eval_word(wpow, gg);
  NilEndo conj = conjugation_by(w);
  m.twist_endo = NilEndo::identity(gg);
  for (std::size_t p = 0; p < pairs; ++p)
    if (m.pair_side[p] == 2) {
      m.twist_endo.images[m.model.a_index(p)] =
          conj.images[m.model.a_index(p)];
      m.twist_endo.images[m.model.b_index(p)] =
          conj.images[m.model.b_index(p)];
    }
  // the boundary word is null-homologous, hence central here: the honest
  // twist lift must collapse to the identity on this quotient
  if (!(m.twist_endo == NilEndo::identity(gg)))
    throw crosscheck_error("twist lift is nontrivial on the quotient");

  Order o1 = o1_order(m.model, s);
  if (o1 != 1)
    throw crosscheck_error(
        "primary obstruction did not vanish on a doubled tree");
  return m;
}

/// Secondary-obstruction output. The certificate, when present, is a mod-2
/// functional on the reduced wedge coordinates annihilating every quotient
/// relation and taking value 1 on the class.
struct O2Report {
  Order order = Order::of(1);
  IntVec invariant_factors;
  IntVec class_vector;  // reduced wedge coordinates
  std::vector<std::uint8_t> certificate;
  bool has_certificate = false;
};

namespace detail {

inline IntVec doubled_tree_class(const DoubledTreeModel& m) {
  long g = m.model.genus();
  IntVec full(wedge::full_dim(g));
  for (std::size_t p = 0; p < m.model.handle_pair_count(); ++p)
    if (m.pair_side[p] == 1)
      full[wedge::pair_index(g, m.model.a_index(p), m.model.b_index(p))] =
          m.stabilized_multiplicity;
  return wedge::reduce(g, full);
}

inline std::vector<IntVec> fixed_wedge_generators(const DoubledTreeModel& m) {
  long g = m.model.genus();
  std::size_t n = 2 * static_cast<std::size_t>(g);
  std::vector<IntVec> gens;
  // (v + Sv) ^ u over basis vectors, one v per swap orbit
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t p = i / 2;
    std::size_t di = i % 2 == 0 ? m.model.a_index(m.pair_partner[p])
                                : m.model.b_index(m.pair_partner[p]);
    if (di < i) continue;
    IntVec v(n);
    v[i] = 1;
    v[di] += 1;
    for (std::size_t j = 0; j < n; ++j) {
      IntVec u(n);
      u[j] = 1;
      IntVec w = wedge::product(g, v, u);
      if (!is_zero(w)) gens.push_back(w);
    }
  }
  return gens;
}

inline std::vector<IntVec> swap_pair_generators(const DoubledTreeModel& m) {
  long g = m.model.genus();
  std::size_t n = 2 * static_cast<std::size_t>(g);
  std::vector<IntVec> gens;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t p = i / 2;
    std::size_t di = i % 2 == 0 ? m.model.a_index(m.pair_partner[p])
                                : m.model.b_index(m.pair_partner[p]);
    if (di < i) continue;
    IntVec v(n), u(n);
    v[i] = 1;
    u[di] = 1;
    gens.push_back(wedge::product(g, v, u));
  }
  return gens;
}

/// Mod-2 functional collapsing each swap orbit to its near-side
/// representative and reading off the coefficient of the first near-side
/// handle wedge; kills all quotient relations by construction.
inline std::vector<std::uint8_t> orbit_certificate(const DoubledTreeModel& m) {
  long g = m.model.genus();
  std::size_t n = 2 * static_cast<std::size_t>(g);
  std::vector<std::size_t> rep(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t p = i / 2;
    if (m.pair_side[p] == 1) {
      rep[i] = i;
    } else {
      std::size_t q = m.pair_partner[p];
      rep[i] = i % 2 == 0 ? m.model.a_index(q) : m.model.b_index(q);
    }
  }
  std::size_t first = 0;
  while (first < m.model.handle_pair_count() && m.pair_side[first] != 1)
    ++first;
  std::size_t ta = m.model.a_index(first), tb = m.model.b_index(first);
  std::vector<std::uint8_t> rho(wedge::reduced_dim(g), 0);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j, ++idx) {
      if (idx >= rho.size()) break;
      bool hit = (rep[i] == ta && rep[j] == tb) ||
                 (rep[i] == tb && rep[j] == ta);
      rho[idx] = hit ? 1 : 0;
    }
  return rho;
}

inline int pair_mod2(const std::vector<std::uint8_t>& rho, const IntVec& v) {
  Int acc = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (rho[i]) acc += v[i];
  return static_cast<int>(mod_floor(acc, Int(2)).get_si());
}

}  // namespace detail

/// Order of the secondary obstruction by the handle-block shortcut: quotient
/// the reduced wedge coordinates by the swap coinvariance relations, the
/// fixed-vector wedges, and the orbit pair wedges, then locate the class.
inline O2Report o2_tree_order(const StableGraph& g,
                              const GraphAutomorphism& s) {
  DoubledTreeModel m = build_doubled_tree(g, s);
  IntMatrix smat = automorphism_matrix(m.model, s);
  IntMatrix tmat = twist_matrix(m.model);
  if (!tmat.is_identity())
    throw crosscheck_error("multitwist acts nontrivially on tree homology");

  std::vector<IntVec> m_gens = detail::fixed_wedge_generators(m);
  std::vector<IntVec> d_gens = detail::swap_pair_generators(m);
  IntVec cls = detail::doubled_tree_class(m);
  MQuotient q =
      m_quotient(ModuleAction::torus(tmat, smat), m_gens, d_gens, cls);

  O2Report rep;
  rep.order = q.order;
  rep.invariant_factors = q.presentation.invariant_factors();
  rep.class_vector = cls;
  if (rep.order == 2) {
    rep.certificate = detail::orbit_certificate(m);
    long gg = m.model.genus();
    IntMatrix swedge = wedge::induced_action(gg, smat);
    IntMatrix id = IntMatrix::identity(swedge.rows());
    IntMatrix rels = swedge - id;
    for (std::size_t j = 0; j < rels.cols(); ++j)
      if (detail::pair_mod2(rep.certificate, rels.col(j)) != 0)
        throw crosscheck_error("certificate misses a coinvariance relation");
    for (const auto& v : m_gens)
      if (detail::pair_mod2(rep.certificate, v) != 0)
        throw crosscheck_error("certificate misses a pairing generator");
    for (const auto& v : d_gens)
      if (detail::pair_mod2(rep.certificate, v) != 0)
        throw crosscheck_error("certificate misses a boundary generator");
    if (detail::pair_mod2(rep.certificate, cls) != 1)
      throw crosscheck_error("certificate does not detect the class");
    rep.has_certificate = true;
  }
  return rep;
}

/// Order of the secondary obstruction through the general machinery: solve
/// for one-cocycles, generate the pairing and boundary images, evaluate the
/// twisted boundary word in the nilpotent quotient, and take the order in the
/// final quotient. Must agree with the shortcut; divergence is fatal.
inline Order o2_generic_order(const DoubledTreeModel& m) {
  IntMatrix smat = automorphism_matrix(m.model, m.sigma);
  IntMatrix tmat = twist_matrix(m.model);
  ModuleAction act = ModuleAction::torus(tmat, smat);

  OneCocycles oc = one_cocycles(act);
  std::vector<Cocycle> basis;
  for (std::size_t j = 0; j < oc.kernel.cols(); ++j)
    basis.push_back(cocycle_from_column(oc.kernel, j));

  std::vector<IntVec> m_gens;
  for (const auto& phi : basis)
    for (const auto& psi : basis) {
      IntVec v = m_pairing(phi, psi, act);
      if (!is_zero(v)) m_gens.push_back(v);
    }
  std::vector<IntVec> d_gens;
  for (const auto& phi : basis) {
    IntVec v = delta(phi, m.swap_endo, m.twist_endo, act);
    if (!is_zero(v)) d_gens.push_back(v);
  }

  std::vector<int> word;
  for (Int i = 0; i < m.stabilized_multiplicity; ++i)
    word.insert(word.end(), m.boundary_word.begin(), m.boundary_word.end());
  IntVec cls = hur2(eval_word(word, m.model.genus()));

  MQuotient q = m_quotient(act, m_gens, d_gens, cls);
  O2Report shortcut = o2_tree_order(m.model.graph(), m.sigma);
  if (q.order != shortcut.order)
    throw crosscheck_error("generic and shortcut orders disagree: " +
                           q.order.str() + " vs " + shortcut.order.str());
  return q.order;
}

}  // namespace morita
