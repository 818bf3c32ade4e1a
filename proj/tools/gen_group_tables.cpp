// Regenerates the bundled multiplication-table corpus under data/groups/.
// Groups are built from permutation or matrix generators by closure; element
// order is breadth-first discovery, so output is deterministic.

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

using Perm = std::vector<int>;

Perm compose(const Perm& a, const Perm& b) {  // (a*b)(x) = a(b(x))
  Perm c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
  return c;
}

struct Table {
  std::size_t n;
  std::vector<std::size_t> mul;
};

Table from_perm_generators(const std::vector<Perm>& gens) {
  std::size_t k = gens[0].size();
  Perm id(k);
  for (std::size_t i = 0; i < k; ++i) id[i] = static_cast<int>(i);
  std::map<Perm, std::size_t> index;
  std::vector<Perm> elems = {id};
  index[id] = 0;
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (const Perm& g : gens) {
      Perm x = compose(elems[i], g);
      if (!index.count(x)) {
        index[x] = elems.size();
        elems.push_back(x);
      }
    }
  Table t{elems.size(), {}};
  t.mul.resize(t.n * t.n);
  for (std::size_t i = 0; i < t.n; ++i)
    for (std::size_t j = 0; j < t.n; ++j)
      t.mul[i * t.n + j] = index.at(compose(elems[i], elems[j]));
  return t;
}

using Mat2 = std::array<int, 4>;

Mat2 mat_mul(const Mat2& a, const Mat2& b, int p) {
  auto m = [&](int x) { return ((x % p) + p) % p; };
  return {m(a[0] * b[0] + a[1] * b[2]), m(a[0] * b[1] + a[1] * b[3]),
          m(a[2] * b[0] + a[3] * b[2]), m(a[2] * b[1] + a[3] * b[3])};
}

Table from_matrix_generators(const std::vector<Mat2>& gens, int p) {
  Mat2 id = {1, 0, 0, 1};
  std::map<Mat2, std::size_t> index;
  std::vector<Mat2> elems = {id};
  index[id] = 0;
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (const Mat2& g : gens) {
      Mat2 x = mat_mul(elems[i], g, p);
      if (!index.count(x)) {
        index[x] = elems.size();
        elems.push_back(x);
      }
    }
  Table t{elems.size(), {}};
  t.mul.resize(t.n * t.n);
  for (std::size_t i = 0; i < t.n; ++i)
    for (std::size_t j = 0; j < t.n; ++j)
      t.mul[i * t.n + j] = index.at(mat_mul(elems[i], elems[j], p));
  return t;
}

Table cyclic(std::size_t n) {
  Table t{n, {}};
  t.mul.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t.mul[i * n + j] = (i + j) % n;
  return t;
}

Table product(const Table& a, const Table& b) {
  Table t{a.n * b.n, {}};
  t.mul.resize(t.n * t.n);
  for (std::size_t i = 0; i < t.n; ++i)
    for (std::size_t j = 0; j < t.n; ++j) {
      std::size_t ai = i / b.n, bi = i % b.n;
      std::size_t aj = j / b.n, bj = j % b.n;
      t.mul[i * t.n + j] =
          a.mul[ai * a.n + aj] * b.n + b.mul[bi * b.n + bj];
    }
  return t;
}

Perm rotation(int n) {
  Perm p(n);
  for (int i = 0; i < n; ++i) p[i] = (i + 1) % n;
  return p;
}

Perm reflection(int n) {
  Perm p(n);
  for (int i = 0; i < n; ++i) p[i] = (n - i) % n;
  return p;
}

// dicyclic group of order 4n inside the unit quaternions mod small prime:
// realized on 2x2 matrices over F_p with a as a primitive 2n-th root block
// and b the standard symplectic twist. p is chosen so 2n | p - 1.
Table dicyclic(int n) {
  // a = [[w, 0], [0, w^-1]], b = [[0, -1], [1, 0]] with w of order 2n
  int p = 5;
  while ((p - 1) % (2 * n) != 0) p += 2;
  int w = 0;
  for (int c = 2; c < p; ++c) {
    int x = 1;
    bool ok = true;
    for (int e = 1; e < 2 * n; ++e) {
      x = x * c % p;
      if (x == 1) {
        ok = false;
        break;
      }
    }
    if (ok && x * c % p == 1) {
      w = c;
      break;
    }
  }
  int winv = 1, x = w;
  for (int e = 1; e < 2 * n - 1; ++e) x = x * w % p;
  winv = x;
  Mat2 a = {w, 0, 0, winv};
  Mat2 b = {0, p - 1, 1, 0};
  return from_matrix_generators({a, b}, p);
}

void write_table(const std::string& dir, const std::string& name,
                 const Table& t) {
  std::ofstream out(dir + "/" + name + ".tbl");
  out << t.n << "\n";
  for (std::size_t i = 0; i < t.n; ++i) {
    for (std::size_t j = 0; j < t.n; ++j)
      out << t.mul[i * t.n + j] << (j + 1 == t.n ? "" : " ");
    out << "\n";
  }
  std::cout << name << " (order " << t.n << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "data/groups";
  std::filesystem::create_directories(dir);

  for (std::size_t n = 1; n <= 24; ++n)
    write_table(dir, "c" + std::to_string(n), cyclic(n));

  write_table(dir, "c2xc2", product(cyclic(2), cyclic(2)));
  write_table(dir, "c2xc4", product(cyclic(2), cyclic(4)));
  write_table(dir, "c2xc6", product(cyclic(2), cyclic(6)));
  write_table(dir, "c2xc8", product(cyclic(2), cyclic(8)));
  write_table(dir, "c2xc10", product(cyclic(2), cyclic(10)));
  write_table(dir, "c2xc12", product(cyclic(2), cyclic(12)));
  write_table(dir, "c3xc3", product(cyclic(3), cyclic(3)));
  write_table(dir, "c3xc6", product(cyclic(3), cyclic(6)));
  write_table(dir, "c4xc4", product(cyclic(4), cyclic(4)));
  write_table(dir, "c2xc2xc2", product(cyclic(2), product(cyclic(2), cyclic(2))));
  write_table(dir, "c2xc2xc4",
              product(cyclic(2), product(cyclic(2), cyclic(4))));
  write_table(dir, "c2xc2xc6",
              product(cyclic(2), product(cyclic(2), cyclic(6))));

  for (int n = 3; n <= 12; ++n)
    write_table(dir, "d" + std::to_string(n),
                from_perm_generators({rotation(n), reflection(n)}));

  write_table(dir, "a4", from_perm_generators({{1, 2, 0, 3}, {0, 2, 3, 1}}));
  write_table(dir, "s4", from_perm_generators({{1, 2, 3, 0}, {1, 0, 2, 3}}));

  write_table(dir, "q8", dicyclic(2));
  write_table(dir, "q12", dicyclic(3));
  write_table(dir, "q16", dicyclic(4));
  write_table(dir, "q20", dicyclic(5));
  write_table(dir, "q24", dicyclic(6));

  // SL(2,3): all determinant-one 2x2 matrices over F_3
  write_table(dir, "sl23",
              from_matrix_generators({{0, 2, 1, 0}, {1, 1, 0, 1}}, 3));

  // Frobenius group of order 20: x -> ax + b over F_5 as permutations
  {
    Perm shift(5), scale(5);
    for (int i = 0; i < 5; ++i) shift[i] = (i + 1) % 5;
    for (int i = 0; i < 5; ++i) scale[i] = 2 * i % 5;
    write_table(dir, "f20", from_perm_generators({shift, scale}));
  }

  // order-21 nonabelian: x -> ax + b over F_7 with a of order 3
  {
    Perm shift(7), scale(7);
    for (int i = 0; i < 7; ++i) shift[i] = (i + 1) % 7;
    for (int i = 0; i < 7; ++i) scale[i] = 2 * i % 7;
    write_table(dir, "g21", from_perm_generators({shift, scale}));
  }

  // modular group of order 16: C8 : C2 with conjugation by the fifth power,
  // realized on the 8 residues plus a swapped copy
  {
    Perm a(16), b(16);
    for (int i = 0; i < 8; ++i) {
      a[i] = (i + 1) % 8;            // rotate first copy
      a[8 + i] = 8 + (i + 5) % 8;    // rotate second copy by the twist
      b[i] = 8 + i;                  // swap copies
      b[8 + i] = i;
    }
    write_table(dir, "m16", from_perm_generators({a, b}));
  }

  return 0;
}
