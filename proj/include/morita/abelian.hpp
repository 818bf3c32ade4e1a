#pragma once

#include <ostream>
#include <string>
#include <utility>

#include "morita/normal_form.hpp"

namespace morita {

/// Order of a group element: a positive integer or infinite. A distinguished
/// variant, never a sentinel value.
class Order {
 public:
  static Order infinite() { return Order(false, 0); }
  static Order of(Int n) { return Order(true, std::move(n)); }

  bool is_finite() const { return finite_; }
  const Int& value() const {
    if (!finite_) throw hypothesis_error("order is infinite");
    return n_;
  }

  bool operator==(const Order& o) const {
    return finite_ == o.finite_ && (!finite_ || n_ == o.n_);
  }
  bool operator!=(const Order& o) const { return !(*this == o); }
  bool operator==(long n) const { return finite_ && n_ == n; }

  std::string str() const { return finite_ ? n_.get_str() : "infinite"; }

 private:
  Order(bool finite, Int n) : finite_(finite), n_(std::move(n)) {}
  bool finite_;
  Int n_;
};

inline std::ostream& operator<<(std::ostream& os, const Order& o) {
  return os << o.str();
}

/// A finitely generated abelian group presented as a cokernel: ambient Z^r
/// modulo the column lattice of the relation matrix.
class AbelianPresentation {
 public:
  explicit AbelianPresentation(IntMatrix relations)
      : ambient_rank_(relations.rows()), relations_(std::move(relations)) {
    SmithResult s = smith_normal_form(relations_);
    u_ = std::move(s.u);
    diag_ = smith_diagonal(s.d);
    std::size_t nonzero = 0;
    for (const Int& d : diag_) {
      if (d == 0) break;
      ++nonzero;
      if (d != 1) invariant_factors_.push_back(d);
    }
    for (std::size_t i = nonzero; i < ambient_rank_; ++i)
      invariant_factors_.push_back(0);
  }

  std::size_t ambient_rank() const { return ambient_rank_; }
  const IntMatrix& relation_matrix() const { return relations_; }

  /// Nonzero entries form a divisibility chain (trivial factors dropped);
  /// zeros encode infinite factors and trail.
  const IntVec& invariant_factors() const { return invariant_factors_; }

  bool is_trivial() const { return invariant_factors_.empty(); }

  /// Least n >= 1 with n*c in the relation lattice, or infinite.
  Order order_of(const IntVec& c) const {
    if (c.size() != ambient_rank_)
      throw input_error("class length does not match ambient rank");
    IntVec t = u_ * c;
    Int n = 1;
    for (std::size_t i = 0; i < ambient_rank_; ++i) {
      if (i < diag_.size() && diag_[i] != 0) {
        n = lcm(n, divexact(diag_[i], gcd(diag_[i], t[i])));
      } else if (t[i] != 0) {
        return Order::infinite();
      }
    }
    return Order::of(n);
  }

 private:
  std::size_t ambient_rank_;
  IntMatrix relations_;
  IntMatrix u_;
  IntVec diag_;
  IntVec invariant_factors_;
};

/// Least n >= 1 with n*c in the column span of m, or infinite.
inline Order cokernel_order_of(const IntMatrix& m, const IntVec& c) {
  return AbelianPresentation(m).order_of(c);
}

}  // namespace morita
