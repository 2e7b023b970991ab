#pragma once

// Geometry of systems reduced modulo a prime: projective enumeration,
// Jacobian ranks, ideal dimensions and the profiles rho_p, s_p.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "vdc/errors.hpp"
#include "vdc/groebner.hpp"
#include "vdc/parallel.hpp"
#include "vdc/polynomial.hpp"
#include "vdc/prime_field.hpp"
#include "vdc/system.hpp"

namespace vdc {

/// A point of F_p^n or of P^{n-1}(F_p) (first nonzero coordinate 1).
using Residues = std::vector<std::uint32_t>;

inline void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw InvalidInput(std::to_string(p) + " is not prime");
  if (p >= (1ULL << 31)) throw InvalidInput("prime too large for the finite-field kernels");
}

/// Members reduced mod p; members that vanish identically are kept and flagged.
struct ModSystem {
  std::uint32_t p = 0;
  std::size_t nvars = 0;
  std::vector<gb::MPoly> members;
  std::vector<bool> vanished;

  bool all_vanished() const { return std::all_of(vanished.begin(), vanished.end(), [](bool v) { return v; }); }
  bool any_vanished() const { return std::any_of(vanished.begin(), vanished.end(), [](bool v) { return v; }); }
};

inline ModSystem reduce_mod(std::size_t nvars, std::span<const Polynomial> polys, std::uint64_t p) {
  require_prime(p);
  ModSystem out;
  out.p = static_cast<std::uint32_t>(p);
  out.nvars = nvars;
  for (const auto& f : polys) {
    if (f.nvars() != nvars) throw InvalidInput("member has wrong variable count");
    out.members.push_back(gb::from_polynomial(f, out.p));
    out.vanished.push_back(out.members.back().empty());
  }
  return out;
}

inline ModSystem reduce_mod(const PolySystem& s, std::uint64_t p) { return reduce_mod(s.nvars(), s.polys(), p); }

inline std::uint64_t projective_size(std::size_t n, std::uint64_t q) {
  std::uint64_t total = 0;
  std::uint64_t pw = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total += pw;
    pw *= q;
  }
  return total;
}

/// Visits the normalized representatives of P^{n-1}(F_q), grouped by the
/// position of the leading 1 and in odometer order within a group.
template <typename Fn>
void for_each_projective_point(std::size_t n, std::uint32_t q, Fn&& fn) {
  Residues x(n, 0);
  for (std::size_t lead = 0; lead < n; ++lead) {
    std::fill(x.begin(), x.end(), 0);
    x[lead] = 1;
    bool carry = false;
    while (!carry) {
      fn(std::as_const(x));
      carry = true;
      for (std::size_t k = n; k > lead + 1;) {
        --k;
        if (++x[k] < q) {
          carry = false;
          break;
        }
        x[k] = 0;
      }
    }
  }
}

inline bool all_homogeneous(std::span<const Polynomial> polys) {
  return std::all_of(polys.begin(), polys.end(), [](const Polynomial& f) { return f.is_homogeneous(); });
}

/// Projective F_p-zeros of homogeneous forms.
inline std::vector<Residues> enumerate_projective_zeros(std::size_t nvars, std::span<const Polynomial> forms,
                                                        std::uint64_t p) {
  if (!all_homogeneous(forms)) throw InvalidInput("projective enumeration needs homogeneous input");
  const ModSystem m = reduce_mod(nvars, forms, p);
  std::vector<Residues> out;
  for_each_projective_point(nvars, m.p, [&](const Residues& x) {
    for (const auto& f : m.members)
      if (gb::evaluate(f, x, m.p) != 0) return;
    out.push_back(x);
  });
  return out;
}

inline std::vector<Residues> enumerate_projective_zeros(const PolySystem& s, std::uint64_t p) {
  return enumerate_projective_zeros(s.nvars(), s.polys(), p);
}

/// Rank over F_p of a matrix of residues.
inline unsigned rank_mod_p(std::vector<std::vector<std::uint64_t>> a, std::uint64_t p) {
  unsigned rank = 0;
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a.front().size();
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] % p == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    const std::uint64_t inv = invmod(a[rank][c] % p, p);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] % p == 0) continue;
      const std::uint64_t factor = a[r][c] % p * inv % p;
      for (std::size_t k = 0; k < cols; ++k) a[r][k] = (a[r][k] % p + p - factor * (a[rank][k] % p) % p) % p;
    }
    ++rank;
  }
  return rank;
}

/// Rank of the Jacobian (grad F_i(x))_i over F_p.
inline unsigned jacobian_rank_at(std::size_t nvars, std::span<const Polynomial> forms, std::span<const std::uint32_t> x,
                                 std::uint64_t p) {
  require_prime(p);
  if (x.size() != nvars) throw InvalidInput("point has wrong dimension");
  std::vector<std::vector<std::uint64_t>> j;
  for (const auto& f : forms) {
    std::vector<std::uint64_t> row;
    for (std::size_t k = 0; k < nvars; ++k)
      row.push_back(gb::evaluate(gb::from_polynomial(f.derivative(k), static_cast<std::uint32_t>(p)), x,
                                 static_cast<std::uint32_t>(p)));
    j.push_back(std::move(row));
  }
  return rank_mod_p(std::move(j), p);
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
inline Polynomial determinant(const std::vector<std::vector<Polynomial>>& a, std::size_t nvars) {
  const std::size_t k = a.size();
  if (k == 0) return Polynomial::constant(nvars, 1);
  if (k == 1) return a[0][0];
  if (k == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  Polynomial total(nvars);
  for (std::size_t c = 0; c < k; ++c) {
    if (a[0][c].is_zero()) continue;
    std::vector<std::vector<Polynomial>> minor;
    for (std::size_t r = 1; r < k; ++r) {
      std::vector<Polynomial> row;
      for (std::size_t cc = 0; cc < k; ++cc)
        if (cc != c) row.push_back(a[r][cc]);
      minor.push_back(std::move(row));
    }
    Polynomial term = a[0][c] * determinant(minor, nvars);
    if (c % 2 == 0)
      total += term;
    else
      total -= term;
  }
  return total;
}

/// All maximal (rows x rows) minors of a rows x nvars polynomial matrix.
inline std::vector<Polynomial> maximal_minors(const std::vector<std::vector<Polynomial>>& m, std::size_t nvars) {
  const std::size_t r = m.size();
  std::vector<Polynomial> out;
  if (r == 0 || r > nvars) return out;
  std::vector<std::size_t> cols(r);
  std::iota(cols.begin(), cols.end(), 0);
  while (true) {
    std::vector<std::vector<Polynomial>> sub(r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t c : cols) sub[i].push_back(m[i][c]);
    Polynomial d = determinant(sub, nvars);
    if (!d.is_zero()) out.push_back(std::move(d));
    std::size_t i = r;
    while (i > 0 && cols[i - 1] == nvars - r + i - 1) --i;
    if (i == 0) break;
    ++cols[i - 1];
    for (std::size_t j = i; j < r; ++j) cols[j] = cols[j - 1] + 1;
  }
  return out;
}

inline std::vector<std::vector<Polynomial>> jacobian(std::span<const Polynomial> forms) {
  std::vector<std::vector<Polynomial>> j;
  for (const auto& f : forms) j.push_back(gradient(f));
  return j;
}

/// Generators over F_p with a lazily computed reduced Groebner basis.
/// Copies share the cached basis; computing it is guarded by a once-flag.
class IdealBasis {
 public:
  IdealBasis(std::uint64_t p, std::size_t nvars, std::span<const Polynomial> generators,
             std::uint64_t budget = gb::kDefaultBudget)
      : p_(static_cast<std::uint32_t>(p)), nvars_(nvars), budget_(budget), cache_(std::make_shared<Cache>()) {
    require_prime(p);
    for (const auto& g : generators) {
      if (g.nvars() != nvars) throw InvalidInput("generator has wrong variable count");
      gens_.push_back(gb::from_polynomial(g, p_));
    }
  }

  std::uint32_t prime() const { return p_; }
  std::size_t nvars() const { return nvars_; }
  const std::vector<gb::MPoly>& generators() const { return gens_; }

  const gb::GroebnerBasis& groebner() const {
    std::call_once(cache_->once, [this] { cache_->basis = gb::groebner(gens_, p_, nvars_, budget_); });
    return cache_->basis;
  }

  /// Leading monomials of the reduced basis.
  std::vector<gb::Mono> staircase() const {
    std::vector<gb::Mono> out;
    for (const auto& g : groebner().basis) out.push_back(g.front().m);
    return out;
  }

 private:
  struct Cache {
    std::once_flag once;
    gb::GroebnerBasis basis;
  };
  std::uint32_t p_;
  std::size_t nvars_;
  std::uint64_t budget_;
  std::vector<gb::MPoly> gens_;
  std::shared_ptr<Cache> cache_;
};

/// Projective dimension of the scheme cut out by homogeneous generators; -1 if empty.
inline int ideal_dimension(const IdealBasis& ideal) { return gb::staircase_dimension(ideal.groebner()); }

inline int projective_dimension(std::size_t nvars, std::span<const Polynomial> gens, std::uint64_t p,
                                std::uint64_t budget = gb::kDefaultBudget) {
  return ideal_dimension(IdealBasis(p, nvars, gens, budget));
}

// ---------------------------------------------------------------------------
// Point-based dimension oracle.

struct BruteforceDimension {
  int dimension = -1;      // max of the two estimates below
  int slicing = -1;        // largest j such that every F_p-rational codim-j subspace meets X(F_{p^k})
  int count_bound = -1;    // largest j forced by #X(F_{p^k}) > deg * #P^{j-1}(F_{p^k})
  std::vector<std::uint64_t> counts;  // #X(F_{p^k}) for k = 1..kmax
};

namespace detail {

// Visits reduced row echelon j x n matrices of rank j over F_p.
template <typename Fn>
void for_each_rref(std::size_t j, std::size_t n, std::uint32_t p, Fn&& fn) {
  std::vector<std::size_t> piv(j);
  std::iota(piv.begin(), piv.end(), 0);
  while (true) {
    // Free slots: row i, columns c > piv[i] that are not pivots.
    std::vector<std::pair<std::size_t, std::size_t>> free;
    for (std::size_t i = 0; i < j; ++i)
      for (std::size_t c = piv[i] + 1; c < n; ++c)
        if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.emplace_back(i, c);
    std::vector<std::uint32_t> vals(free.size(), 0);
    std::vector<std::vector<std::uint32_t>> mat(j, std::vector<std::uint32_t>(n, 0));
    while (true) {
      for (auto& row : mat) std::fill(row.begin(), row.end(), 0);
      for (std::size_t i = 0; i < j; ++i) mat[i][piv[i]] = 1;
      for (std::size_t s = 0; s < free.size(); ++s) mat[free[s].first][free[s].second] = vals[s];
      if (!fn(std::as_const(mat))) return;
      std::size_t s = 0;
      while (s < vals.size() && ++vals[s] == p) vals[s++] = 0;
      if (s == vals.size()) break;
    }
    std::size_t i = j;
    while (i > 0 && piv[i - 1] == n - j + i - 1) --i;
    if (i == 0) break;
    ++piv[i - 1];
    for (std::size_t t = i; t < j; ++t) piv[t] = piv[t - 1] + 1;
  }
}

}  // namespace detail

/// Dimension estimate from F_{p^k}-points, k = 1..kmax. The count bound is a
/// rigorous lower bound (Bezout plus the Lang-Weil-free estimate
/// #X(F_q) <= deg(X) * #P^{dim X}(F_q)); the slicing estimate is exact when the
/// relevant intersection points are defined over the tested extensions.
inline BruteforceDimension dimension_bruteforce(std::size_t nvars, std::span<const Polynomial> forms, std::uint64_t p,
                                                unsigned kmax, std::uint64_t budget = 50'000'000) {
  require_prime(p);
  if (!all_homogeneous(forms)) throw InvalidInput("dimension oracle needs homogeneous input");
  if (kmax == 0) throw InvalidInput("kmax must be positive");
  std::vector<gb::MPoly> gens;
  std::uint64_t degree_product = 1;
  for (const auto& f : forms) {
    gens.push_back(gb::from_polynomial(f, static_cast<std::uint32_t>(p)));
    if (!gens.back().empty()) degree_product *= gens.back().front().m.deg;
  }
  BruteforceDimension out;
  for (unsigned k = 1; k <= kmax; ++k) {
    const ExtensionField K(static_cast<std::uint32_t>(p), k);
    const std::uint32_t q = K.order();
    const std::uint64_t total = projective_size(nvars, q);
    if (total * std::max<std::size_t>(1, gens.size()) > budget)
      throw ResourceExhausted("dimension oracle: " + std::to_string(total) + " points over F_" + std::to_string(q) +
                              " exceed the budget");
    std::vector<Residues> pts;
    for_each_projective_point(nvars, q, [&](const Residues& x) {
      for (const auto& g : gens)
        if (gb::evaluate(g, x, K) != 0) return;
      pts.push_back(x);
    });
    out.counts.push_back(pts.size());

    int lb = pts.empty() ? -1 : 0;
    for (int j = 1; j < static_cast<int>(nvars); ++j)
      if (pts.size() > degree_product * projective_size(static_cast<std::size_t>(j), q)) lb = j;
    out.count_bound = std::max(out.count_bound, lb);

    int sl = pts.empty() ? -1 : 0;
    for (std::size_t j = 1; j < nvars && sl == static_cast<int>(j) - 1; ++j) {
      bool every = true;
      detail::for_each_rref(j, nvars, static_cast<std::uint32_t>(p), [&](const auto& mat) {
        const bool met = std::any_of(pts.begin(), pts.end(), [&](const Residues& x) {
          for (const auto& row : mat) {
            std::uint32_t v = 0;
            for (std::size_t c = 0; c < nvars; ++c)
              if (row[c] != 0) v = K.add(v, K.mul(K.from_base(row[c]), x[c]));
            if (v != 0) return false;
          }
          return true;
        });
        if (!met) every = false;
        return every;
      });
      if (every) sl = static_cast<int>(j);
    }
    out.slicing = std::max(out.slicing, sl);
  }
  out.dimension = std::max(out.slicing, out.count_bound);
  return out;
}

// ---------------------------------------------------------------------------
// Profiles.

struct VarietyProfile {
  std::uint64_t p = 0;
  int rho = 0;
  int s = -1;
  int dim = -1;                  // projective dimension of Z_{f,p}
  bool counted = false;          // whether the point counts below were computed
  std::uint64_t proj_count = 0;  // #Z_{f,p}(F_p)
  std::uint64_t sing_count = 0;  // F_p-points where the Jacobian has rank < r
  bool degenerate = false;       // every leading form vanished mod p
};

struct ProfileOptions {
  bool count_points = true;
  bool lenient = false;  // report degenerate reductions instead of throwing
  std::uint64_t budget = gb::kDefaultBudget;
};

/// Profile of homogeneous forms F_1..F_r over F_p.
inline VarietyProfile form_profile(std::size_t nvars, std::span<const Polynomial> forms, std::uint64_t p,
                                   const ProfileOptions& opt = {}) {
  require_prime(p);
  if (!all_homogeneous(forms)) throw InvalidInput("profile needs homogeneous forms");
  VarietyProfile out;
  out.p = p;
  const std::size_t r = forms.size();
  const ModSystem m = reduce_mod(nvars, forms, p);
  if (r == 0) {
    out.rho = 0;
    out.s = -1;
    out.dim = static_cast<int>(nvars) - 1;
  } else if (m.all_vanished()) {
    if (!opt.lenient)
      throw HypothesisFailure("all leading forms vanish modulo " + std::to_string(p));
    out.degenerate = true;
    out.rho = 0;
    out.dim = static_cast<int>(nvars) - 1;
    out.s = out.dim;
  } else {
    out.dim = projective_dimension(nvars, forms, p, opt.budget);
    out.rho = static_cast<int>(nvars) - 1 - out.dim;
    if (r > nvars) {
      out.s = out.dim;  // no r x r minors: the rank condition holds everywhere
    } else {
      std::vector<Polynomial> gens(forms.begin(), forms.end());
      for (auto& g : maximal_minors(jacobian(forms), nvars)) gens.push_back(std::move(g));
      out.s = projective_dimension(nvars, gens, p, opt.budget);
    }
  }
  if (opt.count_points) {
    out.counted = true;
    std::vector<std::vector<gb::MPoly>> grads;
    for (const auto& f : forms) {
      std::vector<gb::MPoly> g;
      for (std::size_t k = 0; k < nvars; ++k)
        g.push_back(gb::from_polynomial(f.derivative(k), static_cast<std::uint32_t>(p)));
      grads.push_back(std::move(g));
    }
    for_each_projective_point(nvars, m.p, [&](const Residues& x) {
      for (const auto& f : m.members)
        if (gb::evaluate(f, x, m.p) != 0) return;
      ++out.proj_count;
      if (r == 0) return;
      std::vector<std::vector<std::uint64_t>> j;
      for (const auto& g : grads) {
        std::vector<std::uint64_t> row;
        for (const auto& d : g) row.push_back(gb::evaluate(d, x, m.p));
        j.push_back(std::move(row));
      }
      if (rank_mod_p(std::move(j), p) < r) ++out.sing_count;
    });
  }
  return out;
}

/// rho_p and s_p of a system, computed from its leading forms.
inline VarietyProfile variety_profile(const PolySystem& s, std::uint64_t p, const ProfileOptions& opt = {}) {
  const auto forms = s.leading_forms();
  return form_profile(s.nvars(), forms, p, opt);
}

/// True when p certifies a smooth complete intersection of codimension r.
inline bool is_smooth_ci(const VarietyProfile& v, std::size_t r) {
  return !v.degenerate && v.rho == static_cast<int>(r) && v.s == -1;
}

// ---------------------------------------------------------------------------
// The sets S_y and T_s.

struct TSetReport {
  std::uint64_t p = 0;
  std::size_t nvars = 0;
  std::vector<std::pair<Residues, int>> per_y;  // y -> dim S_y, in enumeration order
  std::vector<std::uint64_t> occupancy;         // index s + 1 for s = -1..n-1: #{y : dim S_y >= s}

  std::uint64_t occupancy_at(int s) const {
    if (s < -1) return per_y.size();
    const auto idx = static_cast<std::size_t>(s + 1);
    return idx < occupancy.size() ? occupancy[idx] : 0;
  }
};

/// Dimension of S_y = {x : y.grad G_i(x) = 0, rank(y.Hess G_i(x))_i < r}.
inline int s_y_dimension(std::size_t nvars, std::span<const Polynomial> forms, std::span<const Integer> y,
                         std::uint64_t p, std::uint64_t budget = gb::kDefaultBudget) {
  std::vector<Polynomial> h;
  for (const auto& g : forms) h.push_back(directional_derivative(g, y));
  std::vector<Polynomial> gens = h;
  if (h.size() <= nvars)
    for (auto& mnr : maximal_minors(jacobian(h), nvars)) gens.push_back(std::move(mnr));
  return projective_dimension(nvars, gens, p, budget);
}

inline TSetReport build_T_sets(const PolySystem& G, std::uint64_t p, std::uint64_t budget = gb::kDefaultBudget) {
  require_prime(p);
  const std::size_t n = G.nvars();
  for (std::size_t i = 0; i < G.size(); ++i)
    if (!G[i].is_homogeneous()) throw InvalidInput("member " + std::to_string(i + 1) + " is not homogeneous");
  for (unsigned d : G.multidegree())
    if ((static_cast<std::uint64_t>(d) * (d - 1)) % p == 0)
      throw HypothesisFailure(std::to_string(p) + " divides d(d-1) for a member of degree " + std::to_string(d));
  const VarietyProfile prof = variety_profile(G, p, {.count_points = false, .budget = budget});
  if (!is_smooth_ci(prof, G.size()))
    throw HypothesisFailure("forms are not a smooth complete intersection modulo " + std::to_string(p) +
                            " (rho=" + std::to_string(prof.rho) + ", s=" + std::to_string(prof.s) + ")");

  std::vector<Residues> ys;
  for_each_projective_point(n, static_cast<std::uint32_t>(p), [&](const Residues& y) { ys.push_back(y); });
  const auto dims = parallel_map<int>(ys.size(), [&](std::size_t i) {
    std::vector<Integer> y(ys[i].begin(), ys[i].end());
    return s_y_dimension(n, G.polys(), y, p, budget);
  });

  TSetReport out;
  out.p = p;
  out.nvars = n;
  out.occupancy.assign(n + 1, 0);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    out.per_y.emplace_back(ys[i], dims[i]);
    for (int s = -1; s <= dims[i]; ++s) ++out.occupancy[static_cast<std::size_t>(s + 1)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Affine counts modulo p.

/// #{u in F_p^n : f(u) = 0 mod p for all members}. The last variable is
/// handled by Horner evaluation of each member as a polynomial in x_n whose
/// coefficients are evaluated once per prefix.
inline std::uint64_t affine_count_mod_p(std::size_t nvars, std::span<const Polynomial> polys, std::uint64_t p) {
  const ModSystem m = reduce_mod(nvars, polys, p);
  if (nvars == 0) return m.all_vanished() || polys.empty() ? 1 : 0;
  const std::uint32_t P = m.p;
  std::uint64_t pn = 1;
  for (std::size_t i = 0; i < nvars; ++i) pn *= P;
  if (polys.empty()) return pn;

  // coeff[i][e] = coefficient of x_n^e in member i (terms in the other variables).
  struct Split {
    std::vector<gb::MPoly> coeff;
  };
  std::vector<Split> split;
  unsigned max_exp = 1;
  for (const auto& f : m.members) {
    Split s;
    for (const auto& t : f) {
      const unsigned e = t.m.e[nvars - 1];
      if (s.coeff.size() <= e) s.coeff.resize(e + 1);
      gb::Term rest = t;
      rest.m.e[nvars - 1] = 0;
      s.coeff[e].push_back(rest);
      for (std::size_t k = 0; k < nvars; ++k) max_exp = std::max<unsigned>(max_exp, t.m.e[k]);
    }
    split.push_back(std::move(s));
  }
  // pw[v * (max_exp+1) + e] = v^e mod p
  std::vector<std::uint32_t> pw(static_cast<std::size_t>(P) * (max_exp + 1));
  for (std::uint32_t v = 0; v < P; ++v) {
    std::uint64_t acc = 1;
    for (unsigned e = 0; e <= max_exp; ++e) {
      pw[v * (max_exp + 1) + e] = static_cast<std::uint32_t>(acc);
      acc = acc * v % P;
    }
  }
  auto eval_prefix = [&](const gb::MPoly& f, const Residues& x) {
    std::uint64_t total = 0;
    for (const auto& t : f) {
      std::uint64_t v = t.c;
      for (std::size_t k = 0; k + 1 < nvars; ++k)
        if (t.m.e[k] != 0) v = v * pw[x[k] * (max_exp + 1) + t.m.e[k]] % P;
      total += v;
    }
    return static_cast<std::uint32_t>(total % P);
  };

  const std::size_t outer = nvars >= 2 ? P : 1;
  const auto partial = parallel_map<std::uint64_t>(outer, [&](std::size_t first) {
    Residues x(nvars, 0);
    if (nvars >= 2) x[0] = static_cast<std::uint32_t>(first);
    std::vector<std::vector<std::uint32_t>> c(split.size());
    std::uint64_t count = 0;
    while (true) {
      for (std::size_t i = 0; i < split.size(); ++i) {
        c[i].assign(split[i].coeff.size(), 0);
        for (std::size_t e = 0; e < split[i].coeff.size(); ++e) c[i][e] = eval_prefix(split[i].coeff[e], x);
      }
      for (std::uint32_t t = 0; t < P; ++t) {
        bool ok = true;
        for (std::size_t i = 0; i < c.size() && ok; ++i) {
          std::uint64_t v = 0;
          for (std::size_t e = c[i].size(); e-- > 0;) v = (v * t + c[i][e]) % P;
          ok = v == 0;
        }
        if (ok) ++count;
      }
      // Advance coordinates 1..n-2.
      std::size_t k = nvars - 1;
      bool done = true;
      while (k > 1) {
        --k;
        if (++x[k] < P) {
          done = false;
          break;
        }
        x[k] = 0;
      }
      if (done) break;
    }
    return count;
  });
  return std::accumulate(partial.begin(), partial.end(), std::uint64_t{0});
}

inline std::uint64_t affine_count_mod_p(const PolySystem& s, std::uint64_t p) {
  return affine_count_mod_p(s.nvars(), s.polys(), p);
}

struct HooleyReport {
  std::uint64_t p = 0;
  std::uint64_t affine_count = 0;
  Integer main_term = 0;  // p^{n-r}
  Integer residual = 0;   // affine_count - main_term
  bool certified = false; // profile gave rho_p = r and s_p = -1
  VarietyProfile profile;
};

inline HooleyReport hooley_residual(const PolySystem& s, std::uint64_t p, std::uint64_t budget = gb::kDefaultBudget) {
  HooleyReport out;
  out.p = p;
  out.profile = variety_profile(s, p, {.count_points = false, .lenient = true, .budget = budget});
  out.certified = is_smooth_ci(out.profile, s.size());
  out.affine_count = affine_count_mod_p(s, p);
  const long exp = static_cast<long>(s.nvars()) - static_cast<long>(s.size());
  out.main_term = exp >= 0 ? ipow(Integer(p), static_cast<unsigned>(exp)) : Integer(0);
  out.residual = Integer(out.affine_count) - out.main_term;
  return out;
}

}  // namespace vdc
