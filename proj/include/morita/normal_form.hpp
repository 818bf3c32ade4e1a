#pragma once

#include <cstdlib>
#include <optional>

#include "morita/intmat.hpp"

namespace morita {

struct HermiteResult {
  IntMatrix h;  // row Hermite form
  IntMatrix u;  // unimodular, u * m = h
};

/// Row Hermite normal form: echelon shape, positive pivots, entries above a
/// pivot reduced into [0, pivot).
inline HermiteResult hermite_normal_form(IntMatrix m) {
  std::size_t rows = m.rows(), cols = m.cols();
  IntMatrix u = IntMatrix::identity(rows);
  std::size_t r = 0;
  for (std::size_t j = 0; j < cols && r < rows; ++j) {
    // euclidean passes until at most one nonzero entry remains at or below r
    for (;;) {
      std::size_t best = rows;
      for (std::size_t i = r; i < rows; ++i) {
        if (m(i, j) == 0) continue;
        if (best == rows || mpz_cmpabs(m(i, j).get_mpz_t(),
                                       m(best, j).get_mpz_t()) < 0)
          best = i;
      }
      if (best == rows) break;  // column empty below r
      m.swap_rows(r, best);
      u.swap_rows(r, best);
      if (m(r, j) < 0) {
        m.negate_row(r);
        u.negate_row(r);
      }
      bool again = false;
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (m(i, j) == 0) continue;
        Int q = fdiv(m(i, j), m(r, j));
        m.addmul_row(i, r, -q);
        u.addmul_row(i, r, -q);
        if (m(i, j) != 0) again = true;
      }
      if (!again) break;
    }
    if (m(r, j) != 0) {
      for (std::size_t i = 0; i < r; ++i) {
        Int q = fdiv(m(i, j), m(r, j));
        if (q != 0) {
          m.addmul_row(i, r, -q);
          u.addmul_row(i, r, -q);
        }
      }
      ++r;
    }
  }
  return {std::move(m), std::move(u)};
}

struct SmithResult {
  IntMatrix d;  // diagonal, nonnegative, divisibility chain
  IntMatrix u;  // unimodular, u * m * v = d
  IntMatrix v;  // unimodular
};

inline SmithResult smith_normal_form(IntMatrix m) {
  std::size_t rows = m.rows(), cols = m.cols();
  IntMatrix u = IntMatrix::identity(rows);
  IntMatrix v = IntMatrix::identity(cols);
  std::size_t steps = rows < cols ? rows : cols;
  for (std::size_t k = 0; k < steps; ++k) {
    for (;;) {
      // minimal-absolute-value pivot in the trailing block
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = k; i < rows; ++i)
        for (std::size_t j = k; j < cols; ++j) {
          if (m(i, j) == 0) continue;
          if (pi == rows ||
              mpz_cmpabs(m(i, j).get_mpz_t(), m(pi, pj).get_mpz_t()) < 0) {
            pi = i;
            pj = j;
          }
        }
      if (pi == rows) {
        k = steps;  // trailing block is zero
        break;
      }
      m.swap_rows(k, pi);
      u.swap_rows(k, pi);
      m.swap_cols(k, pj);
      v.swap_cols(k, pj);

      bool dirty = false;
      for (std::size_t i = k + 1; i < rows; ++i) {
        if (m(i, k) == 0) continue;
        Int q = fdiv(m(i, k), m(k, k));
        m.addmul_row(i, k, -q);
        u.addmul_row(i, k, -q);
        if (m(i, k) != 0) dirty = true;
      }
      for (std::size_t j = k + 1; j < cols; ++j) {
        if (m(k, j) == 0) continue;
        Int q = fdiv(m(k, j), m(k, k));
        m.addmul_col(j, k, -q);
        v.addmul_col(j, k, -q);
        if (m(k, j) != 0) dirty = true;
      }
      if (dirty) continue;

      // pivot must divide the whole trailing block
      bool fixed = true;
      for (std::size_t i = k + 1; i < rows && fixed; ++i)
        for (std::size_t j = k + 1; j < cols && fixed; ++j)
          if (mod_floor(m(i, j), m(k, k)) != 0) {
            m.addmul_row(k, i, 1);
            u.addmul_row(k, i, 1);
            fixed = false;
          }
      if (fixed) break;
    }
    if (k == steps) break;
  }
  for (std::size_t k = 0; k < steps; ++k)
    if (m(k, k) < 0) {
      m.negate_row(k);
      u.negate_row(k);
    }
  return {std::move(m), std::move(u), std::move(v)};
}

/// Diagonal of a Smith form as a vector of length min(rows, cols).
inline IntVec smith_diagonal(const IntMatrix& d) {
  std::size_t n = d.rows() < d.cols() ? d.rows() : d.cols();
  IntVec diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = d(i, i);
  return diag;
}

/// Basis of the integer kernel {x : m x = 0}, returned as matrix columns.
inline IntMatrix kernel_basis(const IntMatrix& m) {
  SmithResult s = smith_normal_form(m);
  IntVec diag = smith_diagonal(s.d);
  std::size_t rank = 0;
  while (rank < diag.size() && diag[rank] != 0) ++rank;
  std::size_t dim = m.cols() - rank;
  IntMatrix k(m.cols(), dim);
  for (std::size_t t = 0; t < dim; ++t)
    for (std::size_t i = 0; i < m.cols(); ++i) k(i, t) = s.v(i, rank + t);
  return k;
}

/// One integer solution of m x = b, if any.
inline std::optional<IntVec> solve_columns(const IntMatrix& m,
                                           const IntVec& b) {
  if (b.size() != m.rows()) throw input_error("solve: length mismatch");
  SmithResult s = smith_normal_form(m);
  IntVec c = s.u * b;
  IntVec diag = smith_diagonal(s.d);
  IntVec y(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i < diag.size() && diag[i] != 0) {
      if (mod_floor(c[i], diag[i]) != 0) return std::nullopt;
      y[i] = divexact(c[i], diag[i]);
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return s.v * y;
}

/// Membership of c in the column lattice of m, decided by Hermite reduction of
/// the transpose. Kept distinct from the Smith-based order computation so the
/// two can cross-check each other.
inline bool in_column_span(const IntMatrix& m, const IntVec& c) {
  if (c.size() != m.rows()) throw input_error("span test: length mismatch");
  HermiteResult h = hermite_normal_form(m.transpose());
  IntVec r = c;
  for (std::size_t i = 0; i < h.h.rows(); ++i) {
    std::size_t p = 0;
    while (p < h.h.cols() && h.h(i, p) == 0) ++p;
    if (p == h.h.cols()) break;  // zero rows trail
    if (mod_floor(r[p], h.h(i, p)) != 0) return false;
    Int q = divexact(r[p], h.h(i, p));
    if (q != 0)
      for (std::size_t j = p; j < h.h.cols(); ++j) r[j] -= q * h.h(i, j);
  }
  return is_zero(r);
}

/// Canonical generating matrix of the column lattice (unique per lattice), so
/// two lattices are equal iff these agree.
inline IntMatrix column_lattice_hnf(const IntMatrix& m) {
  HermiteResult h = hermite_normal_form(m.transpose());
  std::size_t nz = 0;
  for (std::size_t i = 0; i < h.h.rows(); ++i) {
    bool zero = true;
    for (std::size_t j = 0; j < h.h.cols(); ++j)
      if (h.h(i, j) != 0) {
        zero = false;
        break;
      }
    if (!zero) nz = i + 1;
  }
  IntMatrix out(m.rows(), nz);
  for (std::size_t i = 0; i < nz; ++i)
    for (std::size_t j = 0; j < m.rows(); ++j) out(j, i) = h.h(i, j);
  return out;
}

/// Inverse of a unimodular matrix; throws if not invertible over the integers.
inline IntMatrix integer_inverse(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw input_error("inverse of non-square");
  SmithResult s = smith_normal_form(m);
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (s.d(i, i) != 1)
      throw input_error("matrix is not invertible over the integers");
  return s.v * s.u;
}

}  // namespace morita
