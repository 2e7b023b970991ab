#pragma once

// Buchberger's algorithm over F_p in grevlex order, and Krull dimension read
// off the leading-term staircase.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vdc/errors.hpp"
#include "vdc/polynomial.hpp"
#include "vdc/prime_field.hpp"

namespace vdc::gb {

inline constexpr std::size_t kMaxVars = 12;
inline constexpr std::uint64_t kDefaultBudget = 1'000'000;

struct Mono {
  std::array<std::uint16_t, kMaxVars> e{};
  std::uint32_t deg = 0;

  bool operator==(const Mono& o) const { return deg == o.deg && e == o.e; }
};

/// Strict grevlex comparison a > b.
inline bool greater(const Mono& a, const Mono& b) {
  if (a.deg != b.deg) return a.deg > b.deg;
  for (std::size_t i = kMaxVars; i-- > 0;)
    if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
  return false;
}

inline bool divides(const Mono& a, const Mono& b) {
  if (a.deg > b.deg) return false;
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (a.e[i] > b.e[i]) return false;
  return true;
}

inline Mono mul(const Mono& a, const Mono& b) {
  Mono r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    const unsigned s = unsigned{a.e[i]} + b.e[i];
    if (s > 0xFFFFU) throw ResourceExhausted("monomial exponent overflow");
    r.e[i] = static_cast<std::uint16_t>(s);
  }
  r.deg = a.deg + b.deg;
  return r;
}

/// b / a, assuming a | b.
inline Mono quotient(const Mono& b, const Mono& a) {
  Mono r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<std::uint16_t>(b.e[i] - a.e[i]);
  r.deg = b.deg - a.deg;
  return r;
}

inline Mono lcm(const Mono& a, const Mono& b) {
  Mono r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    r.e[i] = std::max(a.e[i], b.e[i]);
    r.deg += r.e[i];
  }
  return r;
}

inline bool coprime(const Mono& a, const Mono& b) {
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (a.e[i] != 0 && b.e[i] != 0) return false;
  return true;
}

inline std::uint32_t support_mask(const Mono& a) {
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (a.e[i] != 0) mask |= 1U << i;
  return mask;
}

struct Term {
  Mono m;
  std::uint32_t c;
};

/// Polynomial over F_p: terms in strictly decreasing grevlex order, nonzero coefficients.
using MPoly = std::vector<Term>;

inline MPoly from_polynomial(const Polynomial& f, std::uint32_t p) {
  if (f.nvars() > kMaxVars) throw InvalidInput("too many variables for the Groebner engine");
  MPoly out;
  for (const auto& [m, c] : f.terms()) {
    const auto r = static_cast<std::uint32_t>(mod_floor(c, p));
    if (r == 0) continue;
    Term t{{}, r};
    for (std::size_t i = 0; i < f.nvars(); ++i) {
      if (m[i] > 0xFFFFU) throw InvalidInput("exponent too large");
      t.m.e[i] = static_cast<std::uint16_t>(m[i]);
    }
    t.m.deg = m.total_degree();
    out.push_back(t);
  }
  // Polynomial keeps terms in the same grevlex order, so `out` is already sorted.
  return out;
}

inline Polynomial to_polynomial(const MPoly& f, std::size_t nvars) {
  Polynomial out(nvars);
  for (const auto& t : f) {
    Monomial m(nvars);
    for (std::size_t i = 0; i < nvars; ++i) m[i] = t.m.e[i];
    out.add_term(m, Integer(t.c));
  }
  return out;
}

inline void make_monic(MPoly& f, std::uint32_t p) {
  if (f.empty() || f.front().c == 1) return;
  const std::uint64_t inv = invmod(f.front().c, p);
  for (auto& t : f) t.c = static_cast<std::uint32_t>(t.c * inv % p);
}

/// f - c * m * g, merged in order.
inline MPoly sub_mul(const MPoly& f, std::uint32_t c, const Mono& m, const MPoly& g, std::uint32_t p) {
  MPoly out;
  out.reserve(f.size() + g.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < f.size() || j < g.size()) {
    if (j == g.size()) {
      out.push_back(f[i++]);
      continue;
    }
    const Mono gm = mul(m, g[j].m);
    const auto neg = static_cast<std::uint32_t>((p - std::uint64_t{c} * g[j].c % p) % p);
    if (i == f.size() || greater(gm, f[i].m)) {
      if (neg != 0) out.push_back({gm, neg});
      ++j;
    } else if (greater(f[i].m, gm)) {
      out.push_back(f[i++]);
    } else {
      const auto s = static_cast<std::uint32_t>((std::uint64_t{f[i].c} + neg) % p);
      if (s != 0) out.push_back({gm, s});
      ++i;
      ++j;
    }
  }
  return out;
}

class Reducer {
 public:
  Reducer(std::uint32_t p, std::uint64_t budget) : p_(p), budget_(budget) {}

  std::uint64_t steps() const { return steps_; }

  /// Full normal form of f modulo the monic polynomials in `basis`.
  MPoly normal_form(MPoly f, std::span<const MPoly> basis) {
    MPoly rest;
    while (!f.empty()) {
      const Term lt = f.front();
      const MPoly* hit = nullptr;
      for (const auto& g : basis)
        if (divides(g.front().m, lt.m)) {
          hit = &g;
          break;
        }
      if (hit == nullptr) {
        rest.push_back(lt);
        f.erase(f.begin());
        continue;
      }
      if (++steps_ > budget_)
        throw ResourceExhausted("Groebner reduction budget of " + std::to_string(budget_) + " steps exceeded");
      f = sub_mul(f, lt.c, quotient(lt.m, hit->front().m), *hit, p_);
    }
    return rest;
  }

 private:
  std::uint32_t p_;
  std::uint64_t budget_;
  std::uint64_t steps_ = 0;
};

inline MPoly s_polynomial(const MPoly& f, const MPoly& g, std::uint32_t p) {
  const Mono l = lcm(f.front().m, g.front().m);
  MPoly a;
  const Mono mf = quotient(l, f.front().m);
  for (const auto& t : f) a.push_back({mul(mf, t.m), t.c});
  return sub_mul(a, 1, quotient(l, g.front().m), g, p);
}

struct GroebnerBasis {
  std::uint32_t p = 0;
  std::size_t nvars = 0;
  std::vector<MPoly> basis;  // reduced, monic, sorted by increasing leading monomial
  std::uint64_t reductions = 0;

  bool is_unit() const { return basis.size() == 1 && basis.front().front().m.deg == 0; }
};

/// Reduced Groebner basis of the ideal generated by `gens` over F_p.
inline GroebnerBasis groebner(std::vector<MPoly> gens, std::uint32_t p, std::size_t nvars,
                              std::uint64_t budget = kDefaultBudget) {
  if (nvars > kMaxVars) throw InvalidInput("too many variables for the Groebner engine");
  Reducer red(p, budget);
  std::vector<MPoly> G;
  struct Pair {
    std::size_t i, j;
    Mono lcm;
  };
  std::vector<Pair> pairs;

  auto insert = [&](MPoly h) {
    make_monic(h, p);
    const std::size_t k = G.size();
    for (std::size_t i = 0; i < k; ++i) {
      if (G[i].empty()) continue;
      // Product criterion: coprime leading monomials reduce to zero.
      if (coprime(G[i].front().m, h.front().m)) continue;
      pairs.push_back({i, k, lcm(G[i].front().m, h.front().m)});
    }
    G.push_back(std::move(h));
  };

  // Sort inputs so low-degree generators enter first.
  std::sort(gens.begin(), gens.end(), [](const MPoly& a, const MPoly& b) {
    if (a.empty() || b.empty()) return !a.empty() && b.empty();
    return greater(b.front().m, a.front().m);
  });
  for (auto& f : gens) {
    if (f.empty()) continue;
    MPoly h = red.normal_form(std::move(f), G);
    if (!h.empty()) insert(std::move(h));
  }

  while (!pairs.empty()) {
    // Normal strategy: smallest lcm first.
    auto best = std::min_element(pairs.begin(), pairs.end(),
                                 [](const Pair& a, const Pair& b) { return greater(b.lcm, a.lcm); });
    const Pair pr = *best;
    pairs.erase(best);
    // Chain criterion: skip when some third leading monomial divides the lcm,
    // both companion lcms are proper divisors of it, and both companion pairs
    // have already been treated. Requiring proper divisors avoids the circular
    // case of equal lcms.
    bool redundant = false;
    for (std::size_t k = 0; k < G.size() && !redundant; ++k) {
      if (k == pr.i || k == pr.j || !divides(G[k].front().m, pr.lcm)) continue;
      if (lcm(G[pr.i].front().m, G[k].front().m) == pr.lcm || lcm(G[pr.j].front().m, G[k].front().m) == pr.lcm)
        continue;
      auto pending = [&](std::size_t a, std::size_t b) {
        if (a > b) std::swap(a, b);
        return std::any_of(pairs.begin(), pairs.end(), [&](const Pair& q) { return q.i == a && q.j == b; });
      };
      if (!pending(pr.i, k) && !pending(pr.j, k)) redundant = true;
    }
    if (redundant) continue;
    MPoly h = red.normal_form(s_polynomial(G[pr.i], G[pr.j], p), G);
    if (!h.empty()) insert(std::move(h));
  }

  // Minimalize and interreduce.
  std::vector<MPoly> minimal;
  for (std::size_t i = 0; i < G.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < G.size() && !drop; ++j) {
      if (i == j) continue;
      if (divides(G[j].front().m, G[i].front().m) && (!(G[j].front().m == G[i].front().m) || j < i)) drop = true;
    }
    if (!drop) minimal.push_back(G[i]);
  }
  std::sort(minimal.begin(), minimal.end(),
            [](const MPoly& a, const MPoly& b) { return greater(b.front().m, a.front().m); });
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    MPoly head{minimal[i].front()};
    MPoly tail(minimal[i].begin() + 1, minimal[i].end());
    std::vector<MPoly> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    MPoly reduced = red.normal_form(std::move(tail), others);
    head.insert(head.end(), reduced.begin(), reduced.end());
    minimal[i] = std::move(head);
  }

  GroebnerBasis out;
  out.p = p;
  out.nvars = nvars;
  out.basis = std::move(minimal);
  out.reductions = red.steps();
  return out;
}

/// Projective dimension from the staircase: (largest set of variables U such
/// that no leading monomial is supported inside U) minus one. The unit ideal
/// and ideals containing a power of every variable both give -1.
inline int staircase_dimension(const GroebnerBasis& g) {
  std::vector<std::uint32_t> masks;
  for (const auto& f : g.basis) masks.push_back(support_mask(f.front().m));
  int best = -1;  // affine dimension; -1 encodes the empty affine scheme
  const std::uint32_t full = g.nvars == 32 ? ~0U : (1U << g.nvars);
  for (std::uint32_t u = 0; u < full; ++u) {
    const int size = std::popcount(u);
    if (size <= best) continue;
    const bool independent =
        std::none_of(masks.begin(), masks.end(), [u](std::uint32_t s) { return (s & ~u) == 0; });
    if (independent) best = size;
  }
  return best < 1 ? -1 : best - 1;
}

/// Value of f at a point of F_p^n.
inline std::uint64_t evaluate(const MPoly& f, std::span<const std::uint32_t> x, std::uint32_t p) {
  std::uint64_t total = 0;
  for (const auto& t : f) {
    std::uint64_t v = t.c;
    for (std::size_t i = 0; i < x.size() && v != 0; ++i)
      for (unsigned k = 0; k < t.m.e[i]; ++k) v = v * x[i] % p;
    total += v;
  }
  return total % p;
}

/// Value of an F_p-polynomial at a point with coordinates in an extension field.
inline std::uint32_t evaluate(const MPoly& f, std::span<const std::uint32_t> x, const ExtensionField& K) {
  std::uint32_t total = 0;
  for (const auto& t : f) {
    std::uint32_t v = K.from_base(t.c);
    for (std::size_t i = 0; i < x.size() && v != 0; ++i)
      for (unsigned k = 0; k < t.m.e[i]; ++k) v = K.mul(v, x[i]);
    total = K.add(total, v);
  }
  return total;
}

}  // namespace vdc::gb
