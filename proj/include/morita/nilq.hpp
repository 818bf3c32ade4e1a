#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "morita/intmat.hpp"

namespace morita {

/// Coordinates for the degree-two graded piece of a surface group: wedge
/// squares of Z^{2g} modulo the symplectic class omega = sum x_i ^ y_i.
/// Basis order is x_1 < y_1 < x_2 < ... ; pairs (i, j), i < j, are listed
/// lexicographically and the last pair (x_g ^ y_g) is eliminated against
/// omega, so reduced vectors are simply truncated full vectors.
namespace wedge {

inline std::size_t full_dim(long g) {
  std::size_t n = 2 * static_cast<std::size_t>(g);
  return n * (n - 1) / 2;
}

inline std::size_t reduced_dim(long g) { return full_dim(g) - 1; }

inline std::size_t pair_index(long g, std::size_t i, std::size_t j) {
  std::size_t n = 2 * static_cast<std::size_t>(g);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

/// Substitute x_g ^ y_g = -sum_{k<g} x_k ^ y_k and drop the last coordinate.
inline IntVec reduce(long g, IntVec full) {
  Int c = full.back();
  full.pop_back();
  if (c != 0)
    for (long k = 0; k + 1 < g; ++k)
      full[pair_index(g, 2 * k, 2 * k + 1)] -= c;
  return full;
}

inline IntVec lift(long g, IntVec reduced) {
  reduced.push_back(0);
  return reduced;
}

/// h1 ^ h2 in reduced coordinates.
inline IntVec product(long g, const IntVec& h1, const IntVec& h2) {
  std::size_t n = 2 * static_cast<std::size_t>(g);
  IntVec full(full_dim(g));
  for (std::size_t i = 0; i < n; ++i) {
    if (h1[i] == 0 && h2[i] == 0) continue;
    for (std::size_t j = i + 1; j < n; ++j)
      full[pair_index(g, i, j)] += h1[i] * h2[j] - h1[j] * h2[i];
  }
  return reduce(g, full);
}

/// Collection cocycle of the normal form: sum_{i>j} h1[i] h2[j] e_i ^ e_j.
inline IntVec collection(long g, const IntVec& h1, const IntVec& h2) {
  std::size_t n = 2 * static_cast<std::size_t>(g);
  IntVec full(full_dim(g));
  for (std::size_t i = 0; i < n; ++i) {
    if (h1[i] == 0) continue;
    for (std::size_t j = 0; j < i; ++j)
      full[pair_index(g, j, i)] -= h1[i] * h2[j];
  }
  return reduce(g, full);
}

/// Reduced matrix of the map induced on the quotient by a on Z^{2g};
/// requires a to fix omega modulo omega.
inline IntMatrix induced_action(long g, const IntMatrix& a) {
  std::size_t n = 2 * static_cast<std::size_t>(g);
  if (a.rows() != n || a.cols() != n)
    throw input_error("wedge action: matrix size mismatch");
  IntMatrix out(reduced_dim(g), reduced_dim(g));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t col = pair_index(g, i, j);
      if (col >= reduced_dim(g)) continue;  // eliminated pair
      IntVec img = product(g, a.col(i), a.col(j));
      for (std::size_t r = 0; r < reduced_dim(g); ++r) out(r, col) = img[r];
    }
  // the symplectic class must be preserved up to itself
  IntVec omega_img(reduced_dim(g));
  for (long k = 0; k < g; ++k) {
    IntVec t = product(g, a.col(2 * k), a.col(2 * k + 1));
    for (std::size_t r = 0; r < reduced_dim(g); ++r) omega_img[r] += t[r];
  }
  if (!is_zero(omega_img))
    throw hypothesis_error("action does not preserve the symplectic class");
  return out;
}

}  // namespace wedge

/// Element of the quotient of a genus-g surface group by the third step of its
/// lower central series: an abelianized part h in Z^{2g} and a central part w
/// in the reduced wedge coordinates.
struct NilElement {
  long genus = 0;
  IntVec h;
  IntVec w;

  static NilElement identity(long g) {
    return {g, IntVec(2 * static_cast<std::size_t>(g)),
            IntVec(wedge::reduced_dim(g))};
  }

  /// k in [0, 2g): even k are the a-generators, odd the b-generators.
  static NilElement generator(long g, std::size_t k) {
    NilElement e = identity(g);
    e.h[k] = 1;
    return e;
  }

  bool is_identity() const { return morita::is_zero(h) && morita::is_zero(w); }

  bool operator==(const NilElement& o) const {
    return genus == o.genus && h == o.h && w == o.w;
  }
  bool operator!=(const NilElement& o) const { return !(*this == o); }
};

inline void require_same_genus(const NilElement& x, const NilElement& y) {
  if (x.genus != y.genus) throw input_error("genus mismatch");
}

inline NilElement nil_mul(const NilElement& x, const NilElement& y) {
  require_same_genus(x, y);
  NilElement r;
  r.genus = x.genus;
  r.h = x.h + y.h;
  r.w = x.w + y.w + wedge::collection(x.genus, x.h, y.h);
  return r;
}

inline NilElement nil_inverse(const NilElement& x) {
  NilElement r;
  r.genus = x.genus;
  r.h.resize(x.h.size());
  for (std::size_t i = 0; i < x.h.size(); ++i) r.h[i] = -x.h[i];
  IntVec bxx = wedge::collection(x.genus, x.h, x.h);
  r.w = bxx - x.w;
  return r;
}

/// x^n for any integer n: (n h, n w + n(n-1)/2 collection(h, h)).
inline NilElement nil_pow(const NilElement& x, const Int& n) {
  NilElement r;
  r.genus = x.genus;
  r.h = n * x.h;
  Int half = divexact(n * (n - 1), Int(2));
  IntVec bxx = wedge::collection(x.genus, x.h, x.h);
  r.w = (n * x.w) + (half * bxx);
  return r;
}

/// [x, y] = (0, h_x ^ h_y): commutators land in the center.
inline NilElement nil_commutator(const NilElement& x, const NilElement& y) {
  require_same_genus(x, y);
  NilElement r = NilElement::identity(x.genus);
  r.w = wedge::product(x.genus, x.h, y.h);
  return r;
}

/// Words are sequences of signed generator indices: +(k+1) for generator k,
/// -(k+1) for its inverse.
inline NilElement eval_word(const std::vector<int>& word, long g) {
  NilElement acc = NilElement::identity(g);
  for (int letter : word) {
    if (letter == 0) throw input_error("zero letter in word");
    std::size_t k = static_cast<std::size_t>(std::abs(letter)) - 1;
    if (k >= 2 * static_cast<std::size_t>(g))
      throw input_error("generator index out of range");
    NilElement gen = NilElement::generator(g, k);
    acc = nil_mul(acc, letter > 0 ? gen : nil_inverse(gen));
  }
  return acc;
}

/// Projection of the commutator subgroup piece: defined only when the
/// abelianized part vanishes.
inline IntVec hur2(const NilElement& x) {
  if (!is_zero(x.h))
    throw hypothesis_error("element is not in the commutator subgroup");
  return x.w;
}

inline std::vector<int> commutator_word(int a, int b) {
  return {a, b, -a, -b};
}

/// prod_{i=1}^{g} [a_i, b_i]
inline std::vector<int> surface_relator(long g) {
  std::vector<int> w;
  for (long i = 0; i < g; ++i) {
    int a = static_cast<int>(2 * i) + 1, b = a + 1;
    w.insert(w.end(), {a, b, -a, -b});
  }
  return w;
}

/// Parse "a1 b1 A1 B1" style words; capitals are inverses.
inline std::vector<int> parse_word(const std::string& text, long g) {
  std::vector<int> w;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    char c = text[i++];
    bool inverse = std::isupper(static_cast<unsigned char>(c));
    char base = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (base != 'a' && base != 'b')
      throw input_error("unexpected letter in word: " +
                        std::string(1, c));
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
      ++i;
    if (start == i) throw input_error("letter without index in word");
    long idx = std::stol(text.substr(start, i - start));
    if (idx < 1 || idx > g) throw input_error("generator index out of range");
    int letter = static_cast<int>(2 * (idx - 1)) + (base == 'a' ? 1 : 2);
    w.push_back(inverse ? -letter : letter);
  }
  return w;
}

/// Endomorphism of the 2-nilpotent quotient, given by generator images.
struct NilEndo {
  long genus = 0;
  std::vector<NilElement> images;  // one per generator, 2g of them

  static NilEndo identity(long g) {
    NilEndo e;
    e.genus = g;
    for (std::size_t k = 0; k < 2 * static_cast<std::size_t>(g); ++k)
      e.images.push_back(NilElement::generator(g, k));
    return e;
  }

  static NilEndo from_words(const std::vector<std::vector<int>>& words,
                            long g) {
    if (words.size() != 2 * static_cast<std::size_t>(g))
      throw input_error("endomorphism needs one word per generator");
    NilEndo e;
    e.genus = g;
    for (const auto& w : words) e.images.push_back(eval_word(w, g));
    return e;
  }

  /// Induced matrix on the abelianization, columns the images' h parts.
  IntMatrix induced_h() const {
    std::size_t n = 2 * static_cast<std::size_t>(genus);
    IntMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) m(i, k) = images[k].h[i];
    return m;
  }

  /// Descends to the quotient iff the surface relator maps to the identity.
  bool relator_ok() const {
    NilElement r = NilElement::identity(genus);
    for (long i = 0; i < genus; ++i) {
      r = nil_mul(r, nil_commutator(images[2 * i], images[2 * i + 1]));
    }
    return r.is_identity();
  }

  /// Unique extension through the normal form. The center transforms by the
  /// wedge square of the abelianized map.
  NilElement apply(const NilElement& x) const {
    if (x.genus != genus) throw input_error("genus mismatch");
    NilElement acc = NilElement::identity(genus);
    for (std::size_t k = 0; k < x.h.size(); ++k) {
      if (x.h[k] == 0) continue;
      acc = nil_mul(acc, nil_pow(images[k], x.h[k]));
    }
    // push the central part through wedge^2 of the induced map
    IntVec full = wedge::lift(genus, x.w);
    IntVec img(wedge::reduced_dim(genus));
    std::size_t n = 2 * static_cast<std::size_t>(genus);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j, ++idx) {
        if (full[idx] == 0) continue;
        IntVec t = wedge::product(genus, images[i].h, images[j].h);
        for (std::size_t r = 0; r < img.size(); ++r)
          img[r] += full[idx] * t[r];
      }
    acc.w = acc.w + img;
    return acc;
  }

  /// this after other
  NilEndo compose(const NilEndo& other) const {
    NilEndo e;
    e.genus = genus;
    for (const auto& im : other.images) e.images.push_back(apply(im));
    return e;
  }

  bool operator==(const NilEndo& o) const {
    return genus == o.genus && images == o.images;
  }
};

/// Conjugation by c, as an endomorphism: x -> c x c^{-1}.
inline NilEndo conjugation_by(const NilElement& c) {
  NilEndo e;
  e.genus = c.genus;
  NilElement ci = nil_inverse(c);
  for (std::size_t k = 0; k < 2 * static_cast<std::size_t>(c.genus); ++k)
    e.images.push_back(
        nil_mul(nil_mul(c, NilElement::generator(c.genus, k)), ci));
  return e;
}

/// Checked application; the relator test guards against maps that do not
/// descend to the quotient.
inline NilElement apply_endo(const NilEndo& phi, const NilElement& x) {
  if (!phi.relator_ok())
    throw hypothesis_error("endomorphism does not kill the surface relator");
  return phi.apply(x);
}

}  // namespace morita
