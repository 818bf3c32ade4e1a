#pragma once

#include <algorithm>
#include <deque>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "morita/abelian.hpp"
#include "morita/normal_form.hpp"

namespace morita {

/// Finite group given by its multiplication table. Identity and inverses are
/// verified directly; associativity by Light's test against a generating set.
class FiniteGroup {
 public:
  FiniteGroup(std::size_t n, std::vector<std::size_t> table)
      : n_(n), table_(std::move(table)) {
    if (n_ == 0 || table_.size() != n_ * n_)
      throw input_error("multiplication table has wrong size");
    for (std::size_t x : table_)
      if (x >= n_) throw input_error("table entry out of range");

    id_ = n_;
    for (std::size_t e = 0; e < n_; ++e) {
      bool ok = true;
      for (std::size_t x = 0; x < n_ && ok; ++x)
        ok = mul(e, x) == x && mul(x, e) == x;
      if (ok) {
        id_ = e;
        break;
      }
    }
    if (id_ == n_) throw input_error("table has no identity");

    inv_.assign(n_, n_);
    for (std::size_t x = 0; x < n_; ++x) {
      for (std::size_t y = 0; y < n_; ++y)
        if (mul(x, y) == id_ && mul(y, x) == id_) {
          inv_[x] = y;
          break;
        }
      if (inv_[x] == n_) throw input_error("table element has no inverse");
    }

    gens_ = find_generators();
    for (std::size_t s : gens_)
      for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b)
          if (mul(a, mul(s, b)) != mul(mul(a, s), b))
            throw input_error("table is not associative");
  }

  std::size_t size() const { return n_; }
  std::size_t id() const { return id_; }
  std::size_t mul(std::size_t a, std::size_t b) const {
    return table_[a * n_ + b];
  }
  std::size_t inv(std::size_t a) const { return inv_[a]; }
  const std::vector<std::size_t>& generators() const { return gens_; }

  std::size_t order_of(std::size_t g) const {
    std::size_t k = 1, x = g;
    while (x != id_) {
      x = mul(x, g);
      ++k;
    }
    return k;
  }

  std::vector<std::size_t> closure(std::vector<std::size_t> seed) const {
    std::set<std::size_t> have(seed.begin(), seed.end());
    have.insert(id_);
    std::deque<std::size_t> queue(have.begin(), have.end());
    while (!queue.empty()) {
      std::size_t x = queue.front();
      queue.pop_front();
      for (std::size_t s : seed) {
        for (std::size_t y : {mul(x, s), mul(s, x), inv(x)})
          if (have.insert(y).second) queue.push_back(y);
      }
    }
    return {have.begin(), have.end()};
  }

  bool is_subgroup(const std::vector<std::size_t>& elems) const {
    std::set<std::size_t> s(elems.begin(), elems.end());
    if (!s.count(id_)) return false;
    for (std::size_t a : s) {
      if (a >= n_ || !s.count(inv(a))) return false;
      for (std::size_t b : s)
        if (!s.count(mul(a, b))) return false;
    }
    return true;
  }

  /// One element list per distinct cyclic subgroup, deterministic order.
  std::vector<std::vector<std::size_t>> cyclic_subgroups() const {
    std::set<std::vector<std::size_t>> seen;
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t g = 0; g < n_; ++g) {
      std::vector<std::size_t> elems = closure({g});
      if (seen.insert(elems).second) out.push_back(elems);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) {
                if (a.size() != b.size()) return a.size() < b.size();
                return a < b;
              });
    return out;
  }

  static FiniteGroup parse(std::istream& in) {
    std::size_t n;
    if (!(in >> n)) throw input_error("missing table size");
    std::vector<std::size_t> t(n * n);
    for (auto& x : t)
      if (!(in >> x)) throw input_error("truncated multiplication table");
    return FiniteGroup(n, std::move(t));
  }

 private:
  std::vector<std::size_t> find_generators() const {
    std::vector<std::size_t> gens;
    std::set<std::size_t> have = {id_};
    while (have.size() < n_) {
      std::size_t next = n_;
      for (std::size_t g = 0; g < n_; ++g)
        if (!have.count(g)) {
          next = g;
          break;
        }
      gens.push_back(next);
      auto c = closure(gens);
      have = std::set<std::size_t>(c.begin(), c.end());
    }
    return gens;
  }

  std::size_t n_;
  std::vector<std::size_t> table_;
  std::size_t id_;
  std::vector<std::size_t> inv_;
  std::vector<std::size_t> gens_;
};

/// Finite abelian coefficient module: a direct sum of Z/m_i with one action
/// matrix per group element.
class FiniteModule {
 public:
  FiniteModule(IntVec moduli, std::vector<IntMatrix> action,
               const FiniteGroup& g)
      : moduli_(std::move(moduli)), action_(std::move(action)) {
    std::size_t r = moduli_.size();
    for (const Int& m : moduli_)
      if (m < 1) throw input_error("moduli must be positive");
    if (action_.size() != g.size())
      throw input_error("need one action matrix per group element");
    for (const auto& a : action_) {
      if (a.rows() != r || a.cols() != r)
        throw input_error("action matrix size mismatch");
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
          if (mod_floor(a(i, j) * moduli_[j], moduli_[i]) != 0)
            throw input_error("matrix does not define an endomorphism");
    }
    if (!(reduced(action_[g.id()]) == reduced(IntMatrix::identity(r))))
      throw input_error("identity must act trivially");
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = 0; b < g.size(); ++b)
        if (!(reduced(action_[a] * action_[b]) ==
              reduced(action_[g.mul(a, b)])))
          throw input_error("action is not a homomorphism");
  }

  std::size_t rank() const { return moduli_.size(); }
  const IntVec& moduli() const { return moduli_; }
  const IntMatrix& matrix(std::size_t g) const { return action_[g]; }

  IntVec reduce_vec(IntVec v) const {
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = mod_floor(v[i], moduli_[i]);
    return v;
  }

  /// Restriction of scalars to a subgroup, elements listed in `sub` order.
  FiniteModule restricted(const FiniteGroup& sub,
                          const std::vector<std::size_t>& elems) const {
    std::vector<IntMatrix> act;
    act.reserve(elems.size());
    for (std::size_t e : elems) act.push_back(action_[e]);
    return FiniteModule(moduli_, std::move(act), sub);
  }

  static FiniteModule parse(std::istream& in, const FiniteGroup& g) {
    std::size_t r;
    if (!(in >> r)) throw input_error("missing module rank");
    IntVec moduli(r);
    for (auto& m : moduli) {
      std::string s;
      if (!(in >> s)) throw input_error("truncated moduli line");
      m = Int(s);
    }
    std::vector<IntMatrix> act;
    for (std::size_t e = 0; e < g.size(); ++e) {
      IntMatrix a(r, r);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
          std::string s;
          if (!(in >> s)) throw input_error("truncated action matrix");
          a(i, j) = Int(s);
        }
      act.push_back(std::move(a));
    }
    return FiniteModule(std::move(moduli), std::move(act), g);
  }

 private:
  IntMatrix reduced(IntMatrix m) const {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        m(i, j) = mod_floor(m(i, j), moduli_[i]);
    return m;
  }

  IntVec moduli_;
  std::vector<IntMatrix> action_;
};

/// A cocycle as its full value table, one module element per group element.
using CocycleTable = std::vector<IntVec>;

/// First cohomology of a finite group with finite coefficients, solved as an
/// integer-linear system in the values on a generating set. Keeps enough data
/// to express arbitrary cocycles in the invariant-factor coordinates.
class H1Group {
 public:
  H1Group(const FiniteGroup& g, const FiniteModule& a) : g_(&g), a_(&a) {
    gens_ = g.generators();
    std::size_t k = gens_.size(), r = a.rank(), n = g.size();
    unknowns_ = k * r;

    // value of f on every element as a linear map of the generator values,
    // via f(ps) = f(p) + p f(s) along a breadth-first spanning of the group
    value_map_.assign(n, IntMatrix(r, unknowns_));
    std::vector<char> known(n, 0);
    known[g.id()] = 1;
    std::deque<std::size_t> queue = {g.id()};
    while (!queue.empty()) {
      std::size_t p = queue.front();
      queue.pop_front();
      for (std::size_t si = 0; si < k; ++si) {
        std::size_t q = g.mul(p, gens_[si]);
        if (known[q]) continue;
        known[q] = 1;
        IntMatrix m = value_map_[p];
        const IntMatrix& rho = a.matrix(p);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j)
            m(i, si * r + j) += rho(i, j);
        value_map_[q] = std::move(m);
        queue.push_back(q);
      }
    }

    // every remaining edge g -> g s imposes f(gs) = f(g) + g f(s)
    std::vector<IntVec> rows;
    std::vector<Int> row_moduli;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t si = 0; si < k; ++si) {
        std::size_t q = g.mul(p, gens_[si]);
        IntMatrix c = value_map_[q] - value_map_[p];
        const IntMatrix& rho = a.matrix(p);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j)
            c(i, si * r + j) -= rho(i, j);
        for (std::size_t i = 0; i < r; ++i) {
          IntVec row = c.transpose().col(i);
          if (!is_zero(row)) {
            rows.push_back(row);
            row_moduli.push_back(a.moduli()[i]);
          }
        }
      }

    // solutions mod moduli: kernel of [C | diag(row moduli)], then project
    std::size_t nrows = rows.size();
    IntMatrix sys(nrows, unknowns_ + nrows);
    for (std::size_t i = 0; i < nrows; ++i) {
      for (std::size_t j = 0; j < unknowns_; ++j) sys(i, j) = rows[i][j];
      sys(i, unknowns_ + i) = row_moduli[i];
    }
    IntMatrix ker = kernel_basis(sys);
    IntMatrix span(unknowns_, ker.cols() + unknowns_);
    for (std::size_t j = 0; j < ker.cols(); ++j)
      for (std::size_t i = 0; i < unknowns_; ++i) span(i, j) = ker(i, j);
    for (std::size_t si = 0; si < k; ++si)  // the moduli lattice itself
      for (std::size_t i = 0; i < r; ++i)
        span(si * r + i, ker.cols() + si * r + i) = a.moduli()[i];
    basis_ = column_lattice_hnf(span);

    // principal cocycles f_m(s) = (s - 1) m, plus the moduli lattice
    IntMatrix rel(unknowns_, r + unknowns_);
    for (std::size_t si = 0; si < k; ++si) {
      IntMatrix d = a.matrix(gens_[si]) - IntMatrix::identity(r);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) rel(si * r + i, j) = d(i, j);
    }
    for (std::size_t si = 0; si < k; ++si)
      for (std::size_t i = 0; i < r; ++i)
        rel(si * r + i, r + si * r + i) = a.moduli()[i];

    // rewrite the relation generators in kernel-basis coordinates
    IntMatrix rel_coords(basis_.cols(), rel.cols());
    for (std::size_t j = 0; j < rel.cols(); ++j) {
      auto y = solve_columns(basis_, rel.col(j));
      if (!y) throw crosscheck_error("coboundary escapes the cocycle lattice");
      rel_coords.set_col(j, *y);
    }
    pres_.emplace(rel_coords);

    for (const Int& d : pres_->invariant_factors()) {
      if (d == 0) throw crosscheck_error("first cohomology came out infinite");
      factors_.push_back(d);
    }
    SmithResult s = smith_normal_form(rel_coords);
    u_ = std::move(s.u);
    uinv_ = integer_inverse(u_);
    diag_ = smith_diagonal(s.d);
    for (std::size_t i = 0; i < diag_.size(); ++i)
      if (diag_[i] != 1) nontrivial_.push_back(i);
  }

  const std::vector<Int>& invariant_factors() const { return factors_; }
  bool is_trivial() const { return factors_.empty(); }
  std::size_t factor_count() const { return factors_.size(); }

  /// Full value table of the representative of the i-th factor generator.
  CocycleTable representative(std::size_t i) const {
    IntVec x = basis_ * uinv_.col(nontrivial_[i]);
    return table_from_unknowns(x);
  }

  /// Coordinates of a cocycle's class, one residue per invariant factor.
  IntVec class_of(const CocycleTable& f) const {
    IntVec x(unknowns_);
    std::size_t r = a_->rank();
    for (std::size_t si = 0; si < gens_.size(); ++si)
      for (std::size_t i = 0; i < r; ++i) x[si * r + i] = f[gens_[si]][i];
    auto y = solve_columns(basis_, x);
    if (!y) throw input_error("value table is not a cocycle");
    IntVec z = u_ * *y;
    IntVec out;
    for (std::size_t t = 0; t < nontrivial_.size(); ++t)
      out.push_back(mod_floor(z[nontrivial_[t]], diag_[nontrivial_[t]]));
    return out;
  }

  /// Value table of an integer combination of the factor representatives.
  CocycleTable combine(const IntVec& coeffs) const {
    IntVec x(unknowns_);
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
      if (coeffs[t] == 0) continue;
      IntVec xi = basis_ * uinv_.col(nontrivial_[t]);
      for (std::size_t i = 0; i < unknowns_; ++i) x[i] += coeffs[t] * xi[i];
    }
    return table_from_unknowns(x);
  }

  bool is_cocycle(const CocycleTable& f) const {
    std::size_t n = g_->size();
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        IntVec lhs = f[g_->mul(x, y)];
        IntVec rhs = f[x] + a_->matrix(x) * f[y];
        if (a_->reduce_vec(lhs) != a_->reduce_vec(rhs)) return false;
      }
    return true;
  }

 private:
  CocycleTable table_from_unknowns(const IntVec& x) const {
    CocycleTable f(g_->size());
    for (std::size_t p = 0; p < g_->size(); ++p)
      f[p] = a_->reduce_vec(value_map_[p] * x);
    return f;
  }

  const FiniteGroup* g_;
  const FiniteModule* a_;
  std::vector<std::size_t> gens_;
  std::size_t unknowns_ = 0;
  std::vector<IntMatrix> value_map_;
  IntMatrix basis_;
  std::optional<AbelianPresentation> pres_;
  std::vector<Int> factors_;
  IntMatrix u_, uinv_;
  IntVec diag_;
  std::vector<std::size_t> nontrivial_;
};

inline H1Group h1_finite(const FiniteGroup& g, const FiniteModule& a) {
  if (g.size() > 10000) throw input_error("group size exceeds the bound");
  return H1Group(g, a);
}

/// A subgroup reindexed as a group of its own, remembering the inclusion.
struct Subgroup {
  FiniteGroup group;
  std::vector<std::size_t> elements;  // ambient indices, in local order
};

inline Subgroup make_subgroup(const FiniteGroup& g,
                              std::vector<std::size_t> elems) {
  std::sort(elems.begin(), elems.end());
  if (!g.is_subgroup(elems)) throw input_error("element set is not a subgroup");
  std::map<std::size_t, std::size_t> local;
  for (std::size_t i = 0; i < elems.size(); ++i) local[elems[i]] = i;
  std::vector<std::size_t> table(elems.size() * elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j < elems.size(); ++j)
      table[i * elems.size() + j] = local.at(g.mul(elems[i], elems[j]));
  return {FiniteGroup(elems.size(), std::move(table)), std::move(elems)};
}

/// Value table of a cocycle pulled back to a subgroup.
inline IntVec restrict_class(const Subgroup& sub, const H1Group& sub_h1,
                             const CocycleTable& f) {
  CocycleTable rf(sub.elements.size());
  for (std::size_t i = 0; i < sub.elements.size(); ++i)
    rf[i] = f[sub.elements[i]];
  return sub_h1.class_of(rf);
}

/// Restrict a cocycle to a subgroup and re-express it in H^1 of the subgroup.
inline IntVec restrict_h1(const FiniteGroup& g, const FiniteModule& a,
                          const CocycleTable& f,
                          const std::vector<std::size_t>& elems) {
  Subgroup sub = make_subgroup(g, elems);
  FiniteModule ra = a.restricted(sub.group, sub.elements);
  H1Group h1(sub.group, ra);
  return restrict_class(sub, h1, f);
}

struct CyclicWitness {
  std::size_t generator;
  std::vector<std::size_t> elements;
};

/// Some cyclic subgroup on which the class stays nonzero. The search scans one
/// generator per cyclic subgroup; a nonzero class always has one.
inline std::optional<CyclicWitness> cyclic_witness(const FiniteGroup& g,
                                                   const FiniteModule& a,
                                                   const H1Group& h1,
                                                   const CocycleTable& f) {
  if (is_zero(h1.class_of(f)))
    throw hypothesis_error("class is zero; no witness required");
  for (const auto& elems : g.cyclic_subgroups()) {
    IntVec r = restrict_h1(g, a, f, elems);
    if (!is_zero(r)) {
      std::size_t gen = elems[0];
      for (std::size_t e : elems)
        if (g.closure({e}).size() == elems.size()) {
          gen = e;
          break;
        }
      return CyclicWitness{gen, elems};
    }
  }
  return std::nullopt;
}

}  // namespace morita
