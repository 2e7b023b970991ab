#pragma once

// Polynomial systems, degree groupings, unimodular substitutions and pencils.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "vdc/errors.hpp"
#include "vdc/integer.hpp"
#include "vdc/polynomial.hpp"

namespace vdc {

/// Maximal absolute coefficient over a list of polynomials (0 when empty).
inline Integer height(std::span<const Polynomial> polys) {
  Integer h = 0;
  for (const auto& f : polys)
    for (const auto& [m, c] : f.terms()) {
      Integer a = c < 0 ? Integer(-c) : c;
      if (a > h) h = a;
    }
  return h;
}

inline std::vector<Polynomial> leading_forms(std::span<const Polynomial> polys) {
  std::vector<Polynomial> out;
  out.reserve(polys.size());
  for (const auto& f : polys) out.push_back(leading_form(f));
  return out;
}

/// Members of degree d, in system order, for each 2 <= d <= D; and the
/// suffix systems hat f_i = (f_{i+2}, ..., f_D) for 0 <= i <= D-2.
struct DegreeGrouping {
  unsigned max_degree = 0;
  std::map<unsigned, std::vector<std::size_t>> groups;  // d -> member indices
  std::vector<std::vector<std::size_t>> suffix;          // i -> member indices

  std::size_t group_size(unsigned d) const {
    auto it = groups.find(d);
    return it == groups.end() ? 0 : it->second.size();
  }
};

/// An ordered tuple of integer polynomials in n variables, each of degree >= 2.
class PolySystem {
 public:
  PolySystem() = default;

  PolySystem(std::size_t nvars, std::vector<Polynomial> polys)
      : n_(nvars), polys_(std::move(polys)) {
    for (std::size_t i = 0; i < polys_.size(); ++i) {
      const auto& f = polys_[i];
      if (f.nvars() != n_)
        throw InvalidInput("member " + std::to_string(i + 1) + " has " +
                           std::to_string(f.nvars()) + " variables, expected " + std::to_string(n_));
      const Degree d = f.degree();
      if (!d || *d <= 1)
        throw InvalidInput("member " + std::to_string(i + 1) +
                           " has degree <= 1; every member must have degree >= 2");
    }
  }

  std::size_t nvars() const { return n_; }
  std::size_t size() const { return polys_.size(); }
  bool empty() const { return polys_.empty(); }
  const std::vector<Polynomial>& polys() const { return polys_; }
  const Polynomial& operator[](std::size_t i) const { return polys_[i]; }

  std::vector<unsigned> multidegree() const {
    std::vector<unsigned> d;
    d.reserve(polys_.size());
    for (const auto& f : polys_) d.push_back(*f.degree());
    return d;
  }

  unsigned max_degree() const {
    unsigned D = 0;
    for (const auto& f : polys_) D = std::max(D, *f.degree());
    return D;
  }

  /// Sum of the member degrees.
  unsigned total_degree() const {
    unsigned s = 0;
    for (const auto& f : polys_) s += *f.degree();
    return s;
  }

  std::vector<Polynomial> leading_forms() const { return vdc::leading_forms(polys_); }

  /// r_d for 0 <= d <= D (entries below 2 are zero).
  std::vector<std::size_t> group_sizes() const {
    std::vector<std::size_t> r(max_degree() + 1, 0);
    for (const auto& f : polys_) ++r[*f.degree()];
    return r;
  }

  /// Members of degree >= i + 2, in system order.
  PolySystem suffix(unsigned i) const {
    std::vector<Polynomial> out;
    for (const auto& f : polys_)
      if (*f.degree() >= i + 2) out.push_back(f);
    return PolySystem(n_, std::move(out));
  }

  /// Members of exactly degree d.
  PolySystem degree_group(unsigned d) const {
    std::vector<Polynomial> out;
    for (const auto& f : polys_)
      if (*f.degree() == d) out.push_back(f);
    return PolySystem(n_, std::move(out));
  }

  Integer height() const { return vdc::height(polys_); }

  bool operator==(const PolySystem&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Polynomial> polys_;
};

inline Integer height(const PolySystem& s) { return s.height(); }

inline DegreeGrouping group_by_degree(const PolySystem& s) {
  DegreeGrouping g;
  g.max_degree = s.max_degree();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const unsigned d = *s[i].degree();
    if (d <= 1) throw InvalidInput("degree grouping requires every member to have degree >= 2");
    g.groups[d].push_back(i);
  }
  if (g.max_degree >= 2) {
    g.suffix.resize(g.max_degree - 1);
    for (unsigned i = 0; i + 2 <= g.max_degree; ++i)
      for (std::size_t k = 0; k < s.size(); ++k)
        if (*s[k].degree() >= i + 2) g.suffix[i].push_back(k);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Unimodular maps

using IntMatrix = std::vector<std::vector<Integer>>;

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(IntMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

/// Integer matrix with determinant +-1.
class UnimodularMap {
 public:
  UnimodularMap() = default;
  explicit UnimodularMap(IntMatrix m) : m_(std::move(m)) {
    for (const auto& row : m_)
      if (row.size() != m_.size()) throw InvalidInput("unimodular map must be square");
    const Integer det = determinant(m_);
    if (det != 1 && det != -1) throw InvalidInput("matrix is not unimodular (|det| != 1)");
  }

  static UnimodularMap identity(std::size_t n) {
    IntMatrix m(n, std::vector<Integer>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return UnimodularMap(std::move(m));
  }

  std::size_t dim() const { return m_.size(); }
  const IntMatrix& matrix() const { return m_; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return m_[i][j]; }

  Integer entry_bound() const {
    Integer b = 0;
    for (const auto& row : m_)
      for (const auto& v : row) b = std::max(b, v < 0 ? Integer(-v) : v);
    return b;
  }

  std::vector<Integer> apply(std::span<const Integer> x) const {
    if (x.size() != m_.size()) throw InvalidInput("vector has wrong dimension for map");
    std::vector<Integer> y(m_.size(), 0);
    for (std::size_t i = 0; i < m_.size(); ++i)
      for (std::size_t j = 0; j < m_.size(); ++j) y[i] += m_[i][j] * x[j];
    return y;
  }

 private:
  IntMatrix m_;
};

/// Unimodular M with M^T a = e_n, for primitive a (gcd of entries 1).
inline UnimodularMap complete_to_unimodular(std::span<const Integer> a) {
  const std::size_t n = a.size();
  if (n == 0) throw InvalidInput("empty vector");
  std::vector<Integer> v(a.begin(), a.end());
  // V accumulates row operations: V a = v throughout.
  IntMatrix V(n, std::vector<Integer>(n, 0));
  for (std::size_t i = 0; i < n; ++i) V[i][i] = 1;

  auto row_sub = [&](std::size_t dst, std::size_t src, const Integer& k) {
    v[dst] -= k * v[src];
    for (std::size_t j = 0; j < n; ++j) V[dst][j] -= k * V[src][j];
  };
  auto row_swap = [&](std::size_t i, std::size_t j) {
    std::swap(v[i], v[j]);
    std::swap(V[i], V[j]);
  };

  // Euclid on the entries, collecting the gcd in the last slot.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    while (v[i] != 0) {
      row_sub(n - 1, i, v[n - 1] / v[i]);
      row_swap(i, n - 1);
    }
  }
  if (v[n - 1] != 1 && v[n - 1] != -1) throw InvalidInput("vector is not primitive");
  if (v[n - 1] == -1) {
    v[n - 1] = 1;
    for (auto& x : V[n - 1]) x = -x;
  }
  IntMatrix M(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M[i][j] = V[j][i];
  return UnimodularMap(std::move(M));
}

/// g(x) = f(M (x, b)) as a polynomial in n - 1 variables.
inline Polynomial substitute_affine(const Polynomial& f, const UnimodularMap& M, const Integer& b) {
  const std::size_t n = f.nvars();
  if (M.dim() != n) throw InvalidInput("unimodular map dimension does not match polynomial");
  if (n == 0) throw InvalidInput("cannot pin a coordinate of a 0-variable polynomial");
  std::vector<Polynomial> images;
  images.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial li(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j)
      if (M(i, j) != 0) li.add_term(Monomial::variable(n - 1, j), M(i, j));
    li.add_term(Monomial(n - 1), M(i, n - 1) * b);
    images.push_back(std::move(li));
  }
  return substitute(f, images);
}

// ---------------------------------------------------------------------------
// Pencils

/// Coefficients of a unit lower-triangular change of generators
///   g_i = f_i + sum_{j<i, d_j = d_i} l_ij f_j + sum_{j<i, d_j < d_i} sum_k l_ijk x_k^{d_i-d_j} f_j.
/// Indices are 0-based. Diagonal entries are implicitly 1.
struct PencilTable {
  std::map<std::pair<std::size_t, std::size_t>, Integer> same_degree;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Integer> lower_degree;

  bool is_identity() const {
    auto nz = [](const auto& kv) { return kv.second != 0; };
    return std::none_of(same_degree.begin(), same_degree.end(), nz) &&
           std::none_of(lower_degree.begin(), lower_degree.end(), nz);
  }

  Integer max_abs() const {
    Integer b = 0;
    for (const auto& [k, v] : same_degree) b = std::max(b, v < 0 ? Integer(-v) : v);
    for (const auto& [k, v] : lower_degree) b = std::max(b, v < 0 ? Integer(-v) : v);
    return b;
  }
};

namespace detail {

/// Multipliers c_ij with g_i = f_i + sum_{j<i} c_ij f_j, after validating shape.
inline std::vector<std::vector<Polynomial>> pencil_multipliers(const PolySystem& s,
                                                              const PencilTable& t) {
  const std::size_t r = s.size();
  const std::size_t n = s.nvars();
  const auto deg = s.multidegree();
  std::vector<std::vector<Polynomial>> c(r, std::vector<Polynomial>(r, Polynomial(n)));
  for (const auto& [key, lam] : t.same_degree) {
    const auto [i, j] = key;
    if (i >= r || j >= r) throw InvalidInput("pencil index out of range");
    if (i == j) {
      if (lam != 1) throw InvalidInput("pencil diagonal must be 1");
      continue;
    }
    if (j > i) throw InvalidInput("pencil table must be lower triangular");
    if (deg[i] != deg[j]) throw InvalidInput("same-degree pencil entry joins members of different degree");
    c[i][j] += Polynomial::constant(n, lam);
  }
  for (const auto& [key, lam] : t.lower_degree) {
    const auto [i, j, k] = key;
    if (i >= r || j >= r || k >= n) throw InvalidInput("pencil index out of range");
    if (j >= i) throw InvalidInput("pencil table must be strictly lower triangular");
    if (deg[i] <= deg[j]) throw InvalidInput("shifted pencil entry needs deg f_i > deg f_j");
    c[i][j] += Polynomial::monomial(Monomial::variable(n, k, deg[i] - deg[j]), lam);
  }
  return c;
}

}  // namespace detail

/// Apply a unit-triangular pencil; degrees and the generated ideal are preserved.
inline PolySystem pencil_combine(const PolySystem& s, const PencilTable& t) {
  const auto c = detail::pencil_multipliers(s, t);
  std::vector<Polynomial> g;
  g.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    Polynomial gi = s[i];
    for (std::size_t j = 0; j < i; ++j)
      if (!c[i][j].is_zero()) gi += c[i][j] * s[j];
    if (gi.degree() != s[i].degree())
      throw InvalidInput("pencil cancels the leading form of member " + std::to_string(i + 1));
    g.push_back(std::move(gi));
  }
  return PolySystem(s.nvars(), std::move(g));
}

/// Inverse of pencil_combine: recovers f from g = pencil_combine(f, t) by
/// forward substitution.
inline PolySystem pencil_inverse(const PolySystem& g, const PencilTable& t) {
  const auto c = detail::pencil_multipliers(g, t);
  std::vector<Polynomial> f;
  f.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    Polynomial fi = g[i];
    for (std::size_t j = 0; j < i; ++j)
      if (!c[i][j].is_zero()) fi -= c[i][j] * f[j];
    f.push_back(std::move(fi));
  }
  return PolySystem(g.nvars(), std::move(f));
}

}  // namespace vdc
