#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "morita/abelian.hpp"
#include "morita/nilq.hpp"
#include "morita/normal_form.hpp"

namespace morita {

/// Words in a free group: signed letters, +(k+1) for generator k.
using GroupWord = std::vector<int>;

inline GroupWord free_reduce(const GroupWord& w) {
  GroupWord out;
  for (int x : w) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

inline GroupWord concat(const GroupWord& a, const GroupWord& b) {
  GroupWord c = a;
  c.insert(c.end(), b.begin(), b.end());
  return free_reduce(c);
}

inline GroupWord inverse_word(const GroupWord& a) {
  GroupWord c(a.rbegin(), a.rend());
  for (int& x : c) x = -x;
  return c;
}

/// Element of the integral group ring of a free group, in normalized form.
struct GroupRingElem {
  std::map<GroupWord, Int> terms;

  static GroupRingElem unit() {
    GroupRingElem e;
    e.terms[{}] = 1;
    return e;
  }
  static GroupRingElem of_word(const GroupWord& w) {
    GroupRingElem e;
    e.terms[free_reduce(w)] = 1;
    return e;
  }

  GroupRingElem& add(const GroupWord& w, const Int& c) {
    GroupWord r = free_reduce(w);
    Int& slot = terms[r];
    slot += c;
    if (slot == 0) terms.erase(r);
    return *this;
  }

  bool operator==(const GroupRingElem& o) const { return terms == o.terms; }
};

inline GroupRingElem operator+(const GroupRingElem& a,
                               const GroupRingElem& b) {
  GroupRingElem c = a;
  for (const auto& [w, k] : b.terms) c.add(w, k);
  return c;
}

inline GroupRingElem operator-(const GroupRingElem& a,
                               const GroupRingElem& b) {
  GroupRingElem c = a;
  for (const auto& [w, k] : b.terms) c.add(w, -k);
  return c;
}

inline GroupRingElem operator*(const GroupRingElem& a,
                               const GroupRingElem& b) {
  GroupRingElem c;
  for (const auto& [wa, ka] : a.terms)
    for (const auto& [wb, kb] : b.terms) c.add(concat(wa, wb), ka * kb);
  return c;
}

/// Evaluate on a module: letters act by the given matrices (inverses by the
/// integer inverse). gen_mats are ordered a_1, b_1, ..., a_h, b_h.
inline IntMatrix evaluate(const GroupRingElem& elem,
                          const std::vector<IntMatrix>& gen_mats,
                          std::size_t rank) {
  std::vector<IntMatrix> inv;
  inv.reserve(gen_mats.size());
  for (const auto& m : gen_mats) inv.push_back(integer_inverse(m));
  IntMatrix out(rank, rank);
  for (const auto& [w, c] : elem.terms) {
    IntMatrix prod = IntMatrix::identity(rank);
    for (int letter : w) {
      std::size_t k = static_cast<std::size_t>(std::abs(letter)) - 1;
      if (k >= gen_mats.size())
        throw input_error("letter outside the generator range");
      prod = prod * (letter > 0 ? gen_mats[k] : inv[k]);
    }
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < rank; ++j) out(i, j) += c * prod(i, j);
  }
  return out;
}

/// Fox derivatives of the surface relator R = prod [a_i, b_i] in closed form:
///   dR/da_i = P_i a_i (1 - b_i) a_i^{-1}
///   dR/db_i = P_i a_i b_i (1 - a_i^{-1}) b_i^{-1}
/// with P_i the product of the first i-1 commutators. Returned in the order
/// dR/da_1, dR/db_1, ..., dR/da_h, dR/db_h.
inline std::vector<GroupRingElem> fox_derivatives(long h) {
  if (h < 1) throw input_error("base genus must be at least 1");
  std::vector<GroupRingElem> out;
  GroupWord prefix;  // P_i
  for (long i = 0; i < h; ++i) {
    int a = static_cast<int>(2 * i) + 1, b = a + 1;
    GroupRingElem da;
    da.add(prefix, 1);
    da.add(concat(prefix, {a, b, -a}), -1);
    GroupRingElem db;
    db.add(concat(prefix, {a}), 1);
    db.add(concat(prefix, {a, b, -a, -b}), -1);
    out.push_back(da);
    out.push_back(db);
    prefix = concat(prefix, {a, b, -a, -b});
  }
  return out;
}

/// A base surface group acting on an integer lattice: one invertible matrix
/// per generator a_1, b_1, ..., a_h, b_h. For the torus (h = 1) the a-matrix
/// is the multitwist action and the b-matrix the finite-order automorphism.
struct ModuleAction {
  long base_genus = 1;
  std::size_t rank = 0;
  std::vector<IntMatrix> mats;

  static ModuleAction torus(IntMatrix twist, IntMatrix autom) {
    ModuleAction a;
    a.base_genus = 1;
    a.rank = twist.rows();
    a.mats = {std::move(twist), std::move(autom)};
    a.validate();
    return a;
  }

  static ModuleAction of(long h, std::vector<IntMatrix> gens) {
    ModuleAction a;
    a.base_genus = h;
    if (gens.size() != 2 * static_cast<std::size_t>(h))
      throw input_error("need 2h generator matrices");
    a.rank = gens.empty() ? 0 : gens[0].rows();
    a.mats = std::move(gens);
    a.validate();
    return a;
  }

  const IntMatrix& twist() const { return mats[0]; }   // h = 1 only
  const IntMatrix& autom() const { return mats[1]; }   // h = 1 only

  void validate() const {
    for (const auto& m : mats) {
      if (m.rows() != rank || m.cols() != rank)
        throw input_error("generator matrix size mismatch");
      Int d = determinant(m);
      if (d != 1 && d != -1)
        throw input_error("generator matrix is not invertible over Z");
    }
    // the surface relator must act trivially
    IntMatrix r = IntMatrix::identity(rank);
    for (long i = 0; i < base_genus; ++i) {
      const IntMatrix& a = mats[2 * i];
      const IntMatrix& b = mats[2 * i + 1];
      r = r * a * b * integer_inverse(a) * integer_inverse(b);
    }
    if (!r.is_identity())
      throw input_error("generator matrices violate the surface relation");
  }
};

/// H^2 of the base group with these coefficients, presented as the
/// coinvariants: ambient lattice modulo (g - 1)M over all generators.
inline AbelianPresentation h2_as_coinvariants(const ModuleAction& act) {
  IntMatrix rel(act.rank, 0);
  IntMatrix id = IntMatrix::identity(act.rank);
  for (const auto& m : act.mats) rel = hcat(rel, m - id);
  return AbelianPresentation(rel);
}

/// One-cocycle data for the torus group: a basis of the solution lattice of
/// (1 - S) phi_e - (1 - T) phi_f = 0 inside M + M, and the coboundary
/// generators ((T - 1) m, (S - 1) m).
struct OneCocycles {
  IntMatrix kernel;        // 2n x k, columns are stacked (phi_e; phi_f)
  IntMatrix coboundaries;  // 2n x n
};

inline OneCocycles one_cocycles(const ModuleAction& act) {
  if (act.base_genus != 1)
    throw hypothesis_error("cocycle solver is torus-only");
  std::size_t n = act.rank;
  const IntMatrix& t = act.twist();
  const IntMatrix& s = act.autom();
  IntMatrix id = IntMatrix::identity(n);
  IntMatrix lhs(n, 2 * n);
  IntMatrix is = id - s, it = id - t;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      lhs(i, j) = is(i, j);
      lhs(i, n + j) = -it(i, j);
    }
  OneCocycles out;
  out.kernel = kernel_basis(lhs);
  out.coboundaries = IntMatrix(2 * n, n);
  IntMatrix tm = t - id, sm = s - id;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      out.coboundaries(i, j) = tm(i, j);
      out.coboundaries(n + i, j) = sm(i, j);
    }
  return out;
}

/// Values of a one-cocycle on the two resolution generators.
struct Cocycle {
  IntVec e, f;
};

inline Cocycle cocycle_from_column(const IntMatrix& stacked, std::size_t j) {
  std::size_t n = stacked.rows() / 2;
  Cocycle c;
  c.e.resize(n);
  c.f.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.e[i] = stacked(i, j);
    c.f[i] = stacked(n + i, j);
  }
  return c;
}

inline bool is_cocycle(const ModuleAction& act, const Cocycle& c) {
  IntMatrix id = IntMatrix::identity(act.rank);
  IntVec lhs = (id - act.autom()) * c.e - (id - act.twist()) * c.f;
  return is_zero(lhs);
}

inline Cocycle cocycle_add(const Cocycle& a, const Cocycle& b) {
  return {a.e + b.e, a.f + b.f};
}

/// Cup-commutator pairing on torus one-cocycles with coefficients in the
/// abelianized surface group, landing in the reduced wedge coordinates:
///   m(phi, psi) = phi(e) ^ T psi(f) - phi(f) ^ S psi(e).
inline IntVec m_pairing(const Cocycle& phi, const Cocycle& psi,
                        const ModuleAction& act) {
  if (act.rank % 2 != 0)
    throw input_error("coefficients are not a symplectic lattice");
  long g = static_cast<long>(act.rank / 2);
  if (!is_cocycle(act, phi) || !is_cocycle(act, psi))
    throw hypothesis_error("m pairing requires cocycles");
  IntVec a = wedge::product(g, phi.e, act.twist() * psi.f);
  IntVec b = wedge::product(g, phi.f, act.autom() * psi.e);
  return a - b;
}

/// Optional central parts for the lifts of the cocycle values; the default
/// lift of h is (h, 0).
struct NilLift {
  std::optional<IntVec> w_e, w_f;
};

/// Boundary of a one-cocycle into the degree-two piece, for the torus group
/// acting through the given nilpotent lifts:
///   [lift(e)^{-1}, lift(f)] (lift(f)^T lift(f)^{-1}) (lift(e) (lift(e)^S)^{-1})
/// evaluated in the 2-nilpotent quotient and projected to the center.
inline IntVec delta(const Cocycle& phi, const NilEndo& s_endo,
                    const NilEndo& t_endo, const ModuleAction& act,
                    const NilLift& lift = {}) {
  if (act.rank % 2 != 0)
    throw input_error("coefficients are not a symplectic lattice");
  long g = static_cast<long>(act.rank / 2);
  if (!is_cocycle(act, phi)) throw hypothesis_error("delta requires a cocycle");
  if (!(s_endo.induced_h() == act.autom()) ||
      !(t_endo.induced_h() == act.twist()))
    throw hypothesis_error("nilpotent lifts do not project to the action");
  if (!s_endo.relator_ok() || !t_endo.relator_ok())
    throw hypothesis_error("nilpotent lift does not kill the relator");

  NilElement le{g, phi.e, lift.w_e ? *lift.w_e
                                   : IntVec(wedge::reduced_dim(g))};
  NilElement lf{g, phi.f, lift.w_f ? *lift.w_f
                                   : IntVec(wedge::reduced_dim(g))};
  NilElement r = nil_commutator(nil_inverse(le), lf);
  r = nil_mul(r, nil_mul(t_endo.apply(lf), nil_inverse(lf)));
  r = nil_mul(r, nil_mul(le, nil_inverse(s_endo.apply(le))));
  return hur2(r);  // throws if the cocycle condition failed to cancel
}

/// The quotient receiving the secondary obstruction: coinvariants of the
/// reduced wedge coordinates modulo the images of the pairing m and the
/// boundary delta; also reports the order of a class there.
struct MQuotient {
  AbelianPresentation presentation;
  Order order;
};

inline MQuotient m_quotient(const ModuleAction& act_on_h,
                            const std::vector<IntVec>& m_gens,
                            const std::vector<IntVec>& delta_gens,
                            const IntVec& cls) {
  if (act_on_h.rank % 2 != 0)
    throw input_error("coefficients are not a symplectic lattice");
  long g = static_cast<long>(act_on_h.rank / 2);
  std::size_t dim = wedge::reduced_dim(g);
  if (cls.size() != dim) throw input_error("class has wrong dimension");
  IntMatrix rel(dim, 0);
  IntMatrix id = IntMatrix::identity(dim);
  for (const auto& mat : act_on_h.mats)
    rel = hcat(rel, wedge::induced_action(g, mat) - id);
  for (const auto& v : m_gens) {
    if (v.size() != dim) throw input_error("pairing image has wrong dimension");
    rel = hcat(rel, columns({v}, dim));
  }
  for (const auto& v : delta_gens) {
    if (v.size() != dim)
      throw input_error("boundary image has wrong dimension");
    rel = hcat(rel, columns({v}, dim));
  }
  AbelianPresentation pres(rel);
  Order ord = pres.order_of(cls);
  return {std::move(pres), ord};
}

}  // namespace morita
