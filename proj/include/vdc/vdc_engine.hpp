#pragma once

// Prime selection, modulus plans, regularization, slicing, differencing and
// the variance decomposition used by the differencing argument.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vdc/bounds.hpp"
#include "vdc/counting.hpp"
#include "vdc/errors.hpp"
#include "vdc/ff_geometry.hpp"
#include "vdc/parallel.hpp"
#include "vdc/prime_field.hpp"
#include "vdc/system.hpp"
#include "vdc/weight.hpp"

namespace vdc {

struct EngineOptions {
  double tol = 2.0;         // p ~ xi means p in [xi/tol, xi*tol]
  double gate_const = 8.0;  // xi >= max(gate_const, ln ||F||)
  std::uint64_t budget = gb::kDefaultBudget;
  std::uint64_t enum_budget = kDefaultEnumerationBudget;
};

// ---------------------------------------------------------------------------
// Primes.

struct PrimeTuple {
  unsigned m = 0;
  std::vector<std::uint64_t> primes;  // p_0, ..., p_m
  double xi = 0.0;
  double tol = 2.0;
  std::vector<double> ratios;  // p_0 / xi^2, then p_j / xi
  bool windows_ok = true;

  std::uint64_t p(unsigned i) const { return primes.at(i); }
  std::uint64_t p_m() const { return primes.at(m); }
};

/// Validates a hand-chosen tuple: primes, pairwise distinct, each > D.
inline PrimeTuple make_prime_tuple(std::vector<std::uint64_t> primes, unsigned D, double xi, double tol = 2.0) {
  if (primes.empty()) throw InvalidInput("need at least p_0");
  if (xi <= 0.0) throw InvalidInput("xi must be positive");
  std::set<std::uint64_t> seen;
  for (auto p : primes) {
    if (!is_prime(p)) throw InvalidInput(std::to_string(p) + " is not prime");
    if (p <= D) throw InvalidInput("prime " + std::to_string(p) + " divides D!");
    if (!seen.insert(p).second) throw InvalidInput("primes must be distinct");
  }
  PrimeTuple t;
  t.m = static_cast<unsigned>(primes.size() - 1);
  t.primes = std::move(primes);
  t.xi = xi;
  t.tol = tol;
  for (std::size_t j = 0; j < t.primes.size(); ++j) {
    const double target = j == 0 ? xi * xi : xi;
    const double ratio = static_cast<double>(t.primes[j]) / target;
    t.ratios.push_back(ratio);
    if (ratio < 1.0 / tol || ratio > tol) t.windows_ok = false;
  }
  return t;
}

struct PrimeCheck {
  std::uint64_t p = 0;
  bool coprime = false;  // p > D, so p does not divide D!
  bool rho_ok = false;
  bool s_ok = false;
  int rho = 0;
  std::vector<int> s;  // s_p(hat f_i) for i = 0..depth

  bool good() const { return coprime && rho_ok && s_ok; }
};

/// Checks rho_p(f) = r and s_p(hat f_i) = -1 for i = 0..depth.
inline PrimeCheck check_prime(const PolySystem& S, std::uint64_t p, unsigned depth,
                              std::uint64_t budget = gb::kDefaultBudget) {
  PrimeCheck c;
  c.p = p;
  c.coprime = p > S.max_degree();
  if (!c.coprime) return c;
  const ProfileOptions opt{false, true, budget};
  const VarietyProfile full = variety_profile(S, p, opt);
  c.rho = full.rho;
  c.rho_ok = !full.degenerate && full.rho == static_cast<int>(S.size());
  if (!c.rho_ok) return c;
  c.s_ok = true;
  for (unsigned i = 0; i <= depth; ++i) {
    const PolySystem hat = S.suffix(i);
    const int s = hat.empty() ? -1 : variety_profile(hat, p, opt).s;
    c.s.push_back(s);
    if (s != -1) {
      c.s_ok = false;
      break;
    }
  }
  return c;
}

namespace detail {

struct WindowStats {
  std::size_t candidates = 0, coprimality = 0, rho = 0, s = 0, taken = 0;

  std::string describe() const {
    return std::to_string(candidates) + " candidates: " + std::to_string(coprimality) + " failed coprimality, " +
           std::to_string(rho) + " failed rho_p = r, " + std::to_string(s) + " failed s_p = -1, " +
           std::to_string(taken) + " already used";
  }
};

// Primes of [lo, hi] ordered outward from the target: ascending from the
// target, then descending below it.
inline std::vector<std::uint64_t> window_order(double target, double tol) {
  const auto lo = static_cast<std::uint64_t>(std::max(2.0, std::ceil(target / tol - 1e-9)));
  const auto hi = static_cast<std::uint64_t>(std::floor(target * tol + 1e-9));
  const auto mid = static_cast<std::uint64_t>(std::ceil(target - 1e-9));
  std::vector<std::uint64_t> out;
  if (hi < lo) return out;
  for (auto p : primes_in_range(std::max(mid, lo), hi)) out.push_back(p);
  if (mid > lo) {
    auto below = primes_in_range(lo, mid - 1);
    out.insert(out.end(), below.rbegin(), below.rend());
  }
  return out;
}

}  // namespace detail

/// Lower bound on xi from the log-height gate.
inline double xi_gate(const PolySystem& S, double gate_const) {
  const Integer h = height(S.leading_forms());
  const double lh = h > 0 ? std::log(to_double(Rational(h))) : 0.0;
  return std::max(gate_const, lh);
}

/// Picks p_1 < ... < p_m near xi and p_0 near xi^2, all good for S.
inline PrimeTuple select_primes(const PolySystem& S, double xi, unsigned m, const EngineOptions& opt = {}) {
  if (xi < 2.0) throw InvalidInput("xi must be at least 2");
  if (S.empty()) throw InvalidInput("empty system");
  const unsigned D = S.max_degree();
  if (m + 2 > D) throw InvalidInput("need m <= D - 2");
  const double gate = xi_gate(S, opt.gate_const);
  if (xi < gate) throw HypothesisFailure("xi = " + std::to_string(xi) + " is below the gate " + std::to_string(gate));

  const unsigned depth = D - 2;
  std::set<std::uint64_t> used;
  auto pick = [&](double target, unsigned want, const char* label) {
    detail::WindowStats st;
    std::vector<std::uint64_t> got;
    for (auto p : detail::window_order(target, opt.tol)) {
      if (got.size() == want) break;
      ++st.candidates;
      if (used.count(p) != 0) {
        ++st.taken;
        continue;
      }
      const PrimeCheck c = check_prime(S, p, depth, opt.budget);
      if (!c.coprime)
        ++st.coprimality;
      else if (!c.rho_ok)
        ++st.rho;
      else if (!c.s_ok)
        ++st.s;
      else
        got.push_back(p);
    }
    if (got.size() < want)
      throw HypothesisFailure(std::string("window for ") + label + " exhausted (found " + std::to_string(got.size()) +
                              " of " + std::to_string(want) + "); " + st.describe());
    for (auto p : got) used.insert(p);
    return got;
  };

  std::vector<std::uint64_t> near_xi;
  if (m > 0) {
    near_xi = pick(xi, m, "p_1..p_m");
    std::sort(near_xi.begin(), near_xi.end());
  }
  const auto p0 = pick(xi * xi, 1, "p_0");
  std::vector<std::uint64_t> primes{p0.front()};
  primes.insert(primes.end(), near_xi.begin(), near_xi.end());
  return make_prime_tuple(std::move(primes), D, xi, opt.tol);
}

/// Least prime in [lo, hi] that is good for S with s_p(hat f_i) = -1 for i <= depth.
inline std::uint64_t least_good_prime(const PolySystem& S, std::uint64_t lo, std::uint64_t hi, unsigned depth = 0,
                                      std::uint64_t budget = gb::kDefaultBudget) {
  for (auto p : primes_in_range(lo, hi))
    if (check_prime(S, p, depth, budget).good()) return p;
  throw HypothesisFailure("no good prime in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

// ---------------------------------------------------------------------------
// Modulus plans.

struct ModulusPlan {
  unsigned m = 0;
  unsigned D = 0;
  std::vector<std::uint64_t> primes;
  double xi = 0.0;
  std::map<unsigned, Integer> q;        // q_d for 2 <= d <= D
  std::map<unsigned, Integer> q_tilde;  // q_d / p_m (1 for d = 2)
  std::vector<Integer> q_vector;        // modulus for each member, in system order
  Integer Q = 1;                        // prod q_d^{r_d}
  Integer Q_tilde = 1;                  // prod over d >= 3 of q~_d^{r_d}
  std::uint64_t p_m = 0;
};

inline ModulusPlan modulus_plan(const PrimeTuple& t, const PolySystem& S) {
  const unsigned D = S.max_degree();
  if (S.empty()) throw InvalidInput("empty system");
  if (t.m + 2 > D) throw InvalidInput("need m <= D - 2");
  ModulusPlan plan;
  plan.m = t.m;
  plan.D = D;
  plan.primes = t.primes;
  plan.xi = t.xi;
  plan.p_m = t.p_m();
  for (unsigned d = 2; d <= D; ++d) {
    Integer qd = 1;
    for (unsigned i = 0; i <= std::min(t.m, d - 2); ++i) qd *= t.p(t.m - i);
    plan.q[d] = qd;
    plan.q_tilde[d] = qd / plan.p_m;
  }
  for (unsigned d : S.multidegree()) {
    plan.q_vector.push_back(plan.q.at(d));
    plan.Q *= plan.q.at(d);
    if (d >= 3) plan.Q_tilde *= plan.q_tilde.at(d);
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Regularization by unit-triangular pencils.

struct RegularizeOptions {
  unsigned lambda_max = 3;
  std::uint64_t max_tables = 200000;
  std::uint64_t budget = gb::kDefaultBudget;
};

struct RegularizeResult {
  PolySystem g;
  PencilTable lambda;
  std::vector<std::size_t> order;  // g is built from S[order[0]], S[order[1]], ...
  std::uint64_t witness = 0;
  unsigned Lambda = 0;  // largest |lambda| allowed when the table was found
  std::uint64_t tables_tried = 0;
  Integer height_before = 0;
  Integer height_after = 0;
  double height_exponent = 1.0;  // log ||g|| / log ||f||
};

/// True when every tail (G_{r-j+1}, ..., G_r) is a smooth complete
/// intersection of codimension j modulo p.
inline bool nested_smooth_at(const PolySystem& g, std::uint64_t p, std::uint64_t budget) {
  const auto forms = g.leading_forms();
  const ProfileOptions opt{false, true, budget};
  for (std::size_t j = 1; j <= forms.size(); ++j) {
    std::span<const Polynomial> tail(forms.data() + forms.size() - j, j);
    if (!is_smooth_ci(form_profile(g.nvars(), tail, p, opt), j)) return false;
  }
  return true;
}

inline RegularizeResult regularize(const PolySystem& S, std::span<const std::uint64_t> pool,
                                   const RegularizeOptions& opt = {}) {
  if (S.empty()) throw InvalidInput("empty system");
  if (pool.empty()) throw InvalidInput("empty prime pool");
  for (auto p : pool) require_prime(p);
  {
    bool certified = false;
    for (auto p : pool)
      if (is_smooth_ci(variety_profile(S, p, {false, true, opt.budget}), S.size())) {
        certified = true;
        break;
      }
    if (!certified) throw HypothesisFailure("no pool prime certifies a smooth complete intersection");
  }

  RegularizeResult out;
  out.order.resize(S.size());
  std::iota(out.order.begin(), out.order.end(), 0);
  const auto degs = S.multidegree();
  std::stable_sort(out.order.begin(), out.order.end(), [&](auto a, auto b) { return degs[a] < degs[b]; });
  std::vector<Polynomial> sorted;
  for (auto i : out.order) sorted.push_back(S[i]);
  const PolySystem f(S.nvars(), std::move(sorted));
  const auto d = f.multidegree();
  out.height_before = f.height();

  // Free parameters of the table, in lexicographic order.
  struct Param {
    std::size_t i, j, k;
    bool same;
  };
  std::vector<Param> params;
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      if (d[j] == d[i])
        params.push_back({i, j, 0, true});
      else
        for (std::size_t k = 0; k < f.nvars(); ++k) params.push_back({i, j, k, false});
    }

  // Digit v maps to the value sequence 0, 1, -1, 2, -2, ...
  auto value = [](unsigned v) { return v == 0 ? 0L : (v % 2 == 1 ? static_cast<long>((v + 1) / 2) : -static_cast<long>(v / 2)); };

  for (unsigned Lambda = 1; Lambda <= opt.lambda_max; ++Lambda) {
    const unsigned base = 2 * Lambda + 1;
    std::vector<unsigned> digit(params.size(), 0);
    while (true) {
      const unsigned top = digit.empty() ? 0 : *std::max_element(digit.begin(), digit.end());
      // Tables with every |lambda| < Lambda were tried in an earlier round.
      if (Lambda == 1 || top + 2 >= base) {
        if (++out.tables_tried > opt.max_tables)
          throw ResourceExhausted("regularization search exceeded " + std::to_string(opt.max_tables) + " tables");
        PencilTable t;
        for (std::size_t q = 0; q < params.size(); ++q) {
          const long v = value(digit[q]);
          if (v == 0) continue;
          if (params[q].same)
            t.same_degree[{params[q].i, params[q].j}] = v;
          else
            t.lower_degree[{params[q].i, params[q].j, params[q].k}] = v;
        }
        try {
          PolySystem g = pencil_combine(f, t);
          for (auto p : pool)
            if (nested_smooth_at(g, p, opt.budget)) {
              out.g = std::move(g);
              out.lambda = std::move(t);
              out.witness = p;
              out.Lambda = Lambda;
              out.height_after = out.g.height();
              const double hb = std::log(std::max(2.0, to_double(Rational(out.height_before))));
              out.height_exponent = std::log(std::max(1.0, to_double(Rational(out.height_after)))) / hb;
              return out;
            }
        } catch (const InvalidInput&) {
          // the pencil cancelled a leading form; skip this table
        }
      }
      std::size_t pos = digit.size();
      while (pos > 0 && ++digit[pos - 1] == base) digit[--pos] = 0;
      if (pos == 0) break;
    }
  }
  throw ResourceExhausted("no regularizing pencil with |lambda| <= " + std::to_string(opt.lambda_max));
}

// ---------------------------------------------------------------------------
// Hyperplane slicing.

struct SliceOptions {
  double threshold = 0.5;  // largest admissible sum of 1/p over the prime set
  unsigned max_norm = 3;
  std::uint64_t budget = gb::kDefaultBudget;
};

struct SliceCheck {
  std::uint64_t p = 0;
  int dim_before = -1, dim_after = -1;
  int dim_via_linear_form = -1;  // dim <F, a.x> in the ambient space
  int s_before = -1, s_after = -1;
  bool ok = false;
};

struct SliceResult {
  std::vector<Integer> a;
  Integer norm = 0;  // max |a_i|
  UnimodularMap M;
  Integer entry_bound = 0;
  std::vector<double> kappa_inflation;  // (n ||M||)^j for j = 0..4
  std::vector<SliceCheck> checks;
  std::vector<Polynomial> sliced_forms;  // F_i(M(x', 0)) in n - 1 variables
  std::uint64_t tried = 0;
};

namespace detail {

// Primitive vectors of sup norm A with first nonzero entry positive, ordered
// by l1 norm, then lexicographically descending.
inline std::vector<std::vector<Integer>> slice_candidates(std::size_t n, unsigned A) {
  std::vector<std::vector<long>> raw;
  std::vector<long> v(n, -static_cast<long>(A));
  while (true) {
    long sup = 0, g = 0;
    for (long x : v) {
      sup = std::max(sup, std::labs(x));
      g = std::gcd(g, std::labs(x));
    }
    const auto first = std::find_if(v.begin(), v.end(), [](long x) { return x != 0; });
    if (sup == static_cast<long>(A) && g == 1 && first != v.end() && *first > 0) raw.push_back(v);
    std::size_t pos = n;
    while (pos > 0 && ++v[pos - 1] > static_cast<long>(A)) v[--pos] = -static_cast<long>(A);
    if (pos == 0) break;
  }
  auto l1 = [](const std::vector<long>& x) {
    long s = 0;
    for (long e : x) s += std::labs(e);
    return s;
  };
  std::stable_sort(raw.begin(), raw.end(), [&](const auto& x, const auto& y) {
    if (l1(x) != l1(y)) return l1(x) < l1(y);
    return x > y;
  });
  std::vector<std::vector<Integer>> out;
  for (const auto& x : raw) out.emplace_back(x.begin(), x.end());
  return out;
}

}  // namespace detail

/// Searches a primitive a with dim(Z_p cap H_a) = dim Z_p - 1 and
/// dim Sing(Z_p cap H_a) <= max(-1, s_p - 1) for every p in Pi.
inline SliceResult find_slice_forms(std::size_t n, std::span<const Polynomial> forms, std::span<const std::uint64_t> Pi,
                                    const SliceOptions& opt = {}) {
  if (n < 2) throw InvalidInput("slicing needs at least two variables");
  if (!all_homogeneous(forms)) throw InvalidInput("slicing needs homogeneous forms");
  const std::size_t r = forms.size();
  double recip = 0.0;
  for (auto p : Pi) {
    require_prime(p);
    recip += 1.0 / static_cast<double>(p);
  }
  if (recip > opt.threshold)
    throw HypothesisFailure("sum of 1/p over the prime set is " + std::to_string(recip) + " > " +
                            std::to_string(opt.threshold));
  const ProfileOptions popt{false, true, opt.budget};
  std::vector<VarietyProfile> before;
  for (auto p : Pi) {
    before.push_back(form_profile(n, forms, p, popt));
    if (before.back().degenerate || before.back().rho != static_cast<int>(r))
      throw HypothesisFailure("rho_p != r at p = " + std::to_string(p));
  }

  SliceResult out;
  for (unsigned A = 1; A <= opt.max_norm; ++A) {
    for (auto& a : detail::slice_candidates(n, A)) {
      ++out.tried;
      const UnimodularMap M = complete_to_unimodular(a);
      std::vector<Polynomial> sliced;
      for (const auto& F : forms) sliced.push_back(substitute_affine(F, M, 0));
      Polynomial lin(n);
      for (std::size_t i = 0; i < n; ++i)
        if (a[i] != 0) lin.add_term(Monomial::variable(n, i), a[i]);
      std::vector<Polynomial> with_lin(forms.begin(), forms.end());
      with_lin.push_back(lin);

      std::vector<SliceCheck> checks;
      bool all_ok = true;
      for (std::size_t k = 0; k < Pi.size(); ++k) {
        const auto p = Pi[k];
        SliceCheck c;
        c.p = p;
        c.dim_before = before[k].dim;
        c.s_before = before[k].s;
        const VarietyProfile after = form_profile(n - 1, sliced, p, popt);
        c.dim_after = after.dim;
        c.s_after = after.s;
        c.dim_via_linear_form = projective_dimension(n, with_lin, p, opt.budget);
        const int want_dim = std::max(-1, c.dim_before - 1);
        c.ok = c.dim_after == want_dim && c.dim_via_linear_form == want_dim &&
               c.s_after <= std::max(-1, c.s_before - 1);
        checks.push_back(c);
        if (!c.ok) {
          all_ok = false;
          break;
        }
      }
      if (!all_ok) continue;
      out.a = a;
      out.norm = A;
      out.entry_bound = M.entry_bound();
      const double scale = static_cast<double>(n) * to_double(Rational(out.entry_bound));
      for (int j = 0; j <= 4; ++j) out.kappa_inflation.push_back(std::pow(scale, j));
      out.M = M;
      out.checks = std::move(checks);
      out.sliced_forms = std::move(sliced);
      return out;
    }
  }
  throw ResourceExhausted("no admissible slice with |a| <= " + std::to_string(opt.max_norm));
}

inline SliceResult find_slice(const PolySystem& S, std::span<const std::uint64_t> Pi, const SliceOptions& opt = {}) {
  const auto forms = S.leading_forms();
  return find_slice_forms(S.nvars(), forms, Pi, opt);
}

/// Slices repeatedly until s_p = -1 at every p in Pi, at most n times.
/// Returns the successive slices; kappa inflation compounds along the chain.
inline std::vector<SliceResult> slice_until_smooth(const PolySystem& S, std::span<const std::uint64_t> Pi,
                                                   const SliceOptions& opt = {}) {
  std::vector<SliceResult> chain;
  std::size_t n = S.nvars();
  std::vector<Polynomial> forms = S.leading_forms();
  const ProfileOptions popt{false, true, opt.budget};
  for (std::size_t depth = 0; depth < S.nvars(); ++depth) {
    bool smooth = true;
    for (auto p : Pi)
      if (form_profile(n, forms, p, popt).s != -1) smooth = false;
    if (smooth) return chain;
    chain.push_back(find_slice_forms(n, forms, Pi, opt));
    forms = chain.back().sliced_forms;
    --n;
  }
  throw ResourceExhausted("slicing did not reach a smooth section within n steps");
}

// ---------------------------------------------------------------------------
// Differencing.

struct DifferencedSystem {
  std::size_t nvars = 0;
  std::vector<std::int64_t> y;
  std::uint64_t step = 0;              // p_m
  std::vector<Polynomial> members;     // f_i(x + p_m y) - f_i(x) for members of degree >= 3
  std::vector<std::size_t> source;     // index of the member in the input system
  std::vector<unsigned> source_degree;
  std::vector<Degree> degree;          // actual degrees (empty for the zero polynomial)
  std::map<unsigned, std::size_t> groups;  // new degree d_i - 1 -> count
  bool degenerate = false;             // some y . grad F_i vanishes identically

  /// W_y(t) = W(t) W(t + p_m y / B).
  WeightSpec weight(const WeightSpec& W, double B) const {
    std::vector<double> u;
    for (auto v : y) u.push_back(static_cast<double>(step) * static_cast<double>(v) / B);
    return W.times(W.translated(u));
  }

  /// Members as a system; fails when some difference has degree <= 1.
  PolySystem system() const { return PolySystem(nvars, members); }

  std::vector<Polynomial> leading_forms() const {
    std::vector<Polynomial> out;
    for (const auto& f : members) out.push_back(f.is_zero() ? Polynomial(nvars) : leading_form(f));
    return out;
  }
};

inline DifferencedSystem difference_system(const PolySystem& S, std::span<const std::int64_t> y, std::uint64_t p_m) {
  if (y.size() != S.nvars()) throw InvalidInput("y has the wrong dimension");
  DifferencedSystem out;
  out.nvars = S.nvars();
  out.y.assign(y.begin(), y.end());
  out.step = p_m;
  const std::vector<Integer> yi(y.begin(), y.end());
  const auto degs = S.multidegree();
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (degs[i] < 3) continue;
    Polynomial fy = difference(S[i], yi, Integer(p_m));
    if (is_degenerate_direction(S[i], yi)) out.degenerate = true;
    out.degree.push_back(fy.degree());
    out.members.push_back(std::move(fy));
    out.source.push_back(i);
    out.source_degree.push_back(degs[i]);
    ++out.groups[degs[i] - 1];
  }
  return out;
}

struct YRecord {
  std::vector<std::int64_t> y;
  int rho = 0;
  int s = -1;
  bool degenerate = false;
};

struct YClassification {
  unsigned m = 0;
  std::int64_t Ybound = 0;
  std::size_t nvars = 0;
  int r_tilde = 0;  // number of members of degree >= 3
  std::vector<YRecord> per_y;
  std::map<int, std::uint64_t> rho_counts;
  std::vector<std::uint64_t> s_at_least;  // index t + 1 for t = -1..n-1
  std::vector<double> envelope;           // 10 (2 Ybound + 1)^{n-t-1}, same indexing
  bool within_envelope = true;
};

struct ClassifyOptions {
  std::uint64_t max_y = 200000;
  std::uint64_t budget = gb::kDefaultBudget;
};

inline YClassification classify_y(const PolySystem& S, const PrimeTuple& t, std::int64_t Ybound,
                                  const ClassifyOptions& opt = {}) {
  if (t.m < 1) throw InvalidInput("classification needs m >= 1");
  if (Ybound < 0) throw InvalidInput("Ybound must be non-negative");
  const std::size_t n = S.nvars();
  const long double total = std::pow(static_cast<long double>(2 * Ybound + 1), static_cast<long double>(n));
  if (total > static_cast<long double>(opt.max_y))
    throw ResourceExhausted("classification of " + std::to_string(static_cast<double>(total)) + " directions exceeds " +
                            std::to_string(opt.max_y));
  YClassification out;
  out.m = t.m;
  out.Ybound = Ybound;
  out.nvars = n;
  for (unsigned d : S.multidegree())
    if (d >= 3) ++out.r_tilde;

  std::vector<std::vector<std::int64_t>> ys;
  std::vector<std::int64_t> y(n, -Ybound);
  while (true) {
    ys.push_back(y);
    std::size_t pos = n;
    while (pos > 0 && ++y[pos - 1] > Ybound) y[--pos] = -Ybound;
    if (pos == 0) break;
  }

  const ProfileOptions popt{false, true, opt.budget};
  out.per_y = parallel_map<YRecord>(ys.size(), [&](std::size_t idx) {
    YRecord rec;
    rec.y = ys[idx];
    const bool zero = std::all_of(rec.y.begin(), rec.y.end(), [](auto v) { return v == 0; });
    if (zero) {
      rec.degenerate = true;
      rec.rho = 0;
      rec.s = static_cast<int>(n) - 1;
      return rec;
    }
    const DifferencedSystem ds = difference_system(S, rec.y, t.p_m());
    rec.degenerate = ds.degenerate;
    const auto forms = ds.leading_forms();
    rec.rho = std::numeric_limits<int>::max();
    rec.s = -1;
    for (unsigned i = 0; i < t.m; ++i) {
      const auto p = t.p(i);
      rec.rho = std::min(rec.rho, form_profile(n, forms, p, popt).rho);
      // hat f_i^y: differenced members of new degree >= i + 2
      std::vector<Polynomial> hat;
      for (std::size_t k = 0; k < forms.size(); ++k)
        if (ds.source_degree[k] >= i + 3) hat.push_back(forms[k]);
      rec.s = std::max(rec.s, form_profile(n, hat, p, popt).s);
    }
    if (forms.empty()) rec.rho = 0;
    return rec;
  });

  out.s_at_least.assign(n + 1, 0);
  for (const auto& rec : out.per_y) {
    ++out.rho_counts[rec.rho];
    for (int tt = -1; tt <= rec.s && tt < static_cast<int>(n); ++tt) ++out.s_at_least[static_cast<std::size_t>(tt + 1)];
  }
  for (int tt = -1; tt < static_cast<int>(n); ++tt) {
    const double env = 10.0 * std::pow(static_cast<double>(2 * Ybound + 1), static_cast<double>(static_cast<int>(n) - tt - 1));
    out.envelope.push_back(env);
    if (static_cast<double>(out.s_at_least[static_cast<std::size_t>(tt + 1)]) > env) out.within_envelope = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Variance of the inner sums.

struct VarianceReport {
  std::uint64_t p_m = 0;
  std::vector<double> upsilon;        // indexed by u = sum u_i p_m^i, u_i in [0, p_m)
  std::vector<bool> zero_class;       // p_m divides every member at u
  std::size_t zero_classes = 0;
  double mass = 0.0;                  // sum of W(x/B) over the box
  double main_term = 0.0;             // p_m^{-n} Q~^{-1} mass
  double S = 0.0;                     // sum over zero classes of (upsilon - main)
  double Sigma = 0.0;                 // sum over all classes of (upsilon - main)^2
  double Sigma_augmented = 0.0;       // sum over (u, a) of T_u(a)^2
  double bucket_square_sum = 0.0;     // sum over (u, a) of A_{u,a}^2
  double cross_cancel = 0.0;          // relative gap between the two forms of Sigma_augmented
  double N_W = 0.0;                   // direct N_W(f, B, q)
  double split_residual = 0.0;        // N_W - sum over zero classes of upsilon, relative
  bool cauchy_ok = false;             // S^2 <= #zero classes * Sigma
  bool empty = false;                 // no zero classes
  std::uint64_t buckets = 0;
};

namespace detail {

// f(x) mod q for |x_i| <= L.
class ResidueEvaluator {
 public:
  ResidueEvaluator(const Polynomial& f, std::uint64_t q, std::int64_t L) : n_(f.nvars()), q_(q), L_(L) {
    for (const auto& [m, c] : f.terms()) {
      exps_.push_back(m.exponents());
      coeffs_.push_back(mod_floor(c, q));
      for (unsigned e : m.exponents()) maxe_ = std::max(maxe_, e);
    }
    pow_.assign(static_cast<std::size_t>(2 * L + 1) * (maxe_ + 1), 0);
    for (std::int64_t x = -L; x <= L; ++x) {
      const std::uint64_t r = mod_floor(x, q);
      std::uint64_t acc = 1 % q;
      for (unsigned e = 0; e <= maxe_; ++e) {
        pow_[static_cast<std::size_t>(x + L) * (maxe_ + 1) + e] = acc;
        acc = static_cast<std::uint64_t>(static_cast<unsigned __int128>(acc) * r % q);
      }
    }
  }

  std::uint64_t operator()(const std::int64_t* x) const {
    unsigned __int128 total = 0;
    for (std::size_t t = 0; t < exps_.size(); ++t) {
      unsigned __int128 v = coeffs_[t];
      for (std::size_t i = 0; i < n_; ++i)
        if (exps_[t][i] != 0) v = v * pow_[static_cast<std::size_t>(x[i] + L_) * (maxe_ + 1) + exps_[t][i]] % q_;
      total = (total + v) % q_;
    }
    return static_cast<std::uint64_t>(total);
  }

 private:
  std::size_t n_;
  std::uint64_t q_;
  std::int64_t L_;
  unsigned maxe_ = 0;
  std::vector<std::vector<unsigned>> exps_;
  std::vector<std::uint64_t> coeffs_;
  std::vector<std::uint64_t> pow_;
};

}  // namespace detail

struct VarianceOptions {
  std::uint64_t max_buckets = 50'000'000;
  std::uint64_t enum_budget = 20'000'000;
};

inline VarianceReport variance_report(const PolySystem& S, double B, const ModulusPlan& plan, const WeightSpec& W,
                                      const VarianceOptions& opt = {}) {
  if (plan.m < 1) throw InvalidInput("variance needs m >= 1; use prop_residual for m = 0");
  if (plan.q_vector.size() != S.size()) throw InvalidInput("plan was built for a different system");
  if (W.dim() != S.nvars()) throw InvalidInput("weight dimension differs from the variable count");
  if (B < 1.0) throw InvalidInput("B must be at least 1");
  const std::size_t n = S.nvars();
  const std::uint64_t pm = plan.p_m;
  const std::int64_t L = support_box(W, B);
  detail::check_budget(n, L, opt.enum_budget);

  // Members of degree >= 3 and their reduced moduli.
  const auto degs = S.multidegree();
  std::vector<detail::ResidueEvaluator> tilde;
  std::vector<std::uint64_t> radix;
  for (std::size_t i = 0; i < S.size(); ++i)
    if (degs[i] >= 3) {
      const auto qt = static_cast<std::uint64_t>(plan.q_tilde.at(degs[i]));
      tilde.emplace_back(S[i], qt, L);
      radix.push_back(qt);
    }
  std::uint64_t classes = 1;
  for (std::size_t i = 0; i < n; ++i) classes *= pm;
  std::uint64_t avecs = 1;
  for (auto q : radix) avecs *= q;
  const long double nb = static_cast<long double>(classes) * static_cast<long double>(avecs);
  if (nb > static_cast<long double>(opt.max_buckets))
    throw ResourceExhausted("variance needs " + std::to_string(static_cast<double>(nb)) + " buckets");

  struct Hit {
    std::uint64_t bucket;
    bool tilde_zero;
    double w;
  };
  const std::size_t width = static_cast<std::size_t>(2 * L + 1);
  const auto rows = parallel_map<std::vector<Hit>>(width, [&](std::size_t first) {
    std::vector<Hit> hits;
    std::vector<std::int64_t> x(n, -L);
    x[0] = static_cast<std::int64_t>(first) - L;
    std::vector<double> t(n);
    while (true) {
      for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(x[i]) / B;
      const double w = W(t);
      if (w != 0.0) {
        std::uint64_t u = 0;
        for (std::size_t i = n; i-- > 0;) u = u * pm + mod_floor(x[i], pm);
        std::uint64_t a = 0;
        bool zero = true;
        for (std::size_t k = tilde.size(); k-- > 0;) {
          const std::uint64_t v = tilde[k](x.data());
          zero = zero && v == 0;
          a = a * radix[k] + v;
        }
        hits.push_back({u * avecs + a, zero, w});
      }
      std::size_t pos = n;
      while (pos > 1 && ++x[pos - 1] > L) x[--pos] = -L;
      if (pos <= 1) break;
    }
    return hits;
  });

  VarianceReport rep;
  rep.p_m = pm;
  rep.buckets = static_cast<std::uint64_t>(nb);
  std::vector<NeumaierSum> ups(classes), bucket(rep.buckets);
  NeumaierSum mass;
  for (const auto& row : rows)
    for (const auto& h : row) {
      mass.add(h.w);
      bucket[h.bucket].add(h.w);
      if (h.tilde_zero) ups[h.bucket / avecs].add(h.w);
    }
  rep.mass = mass.value();
  rep.main_term = rep.mass / static_cast<double>(nb);

  // Zero classes: p_m divides every member at the residue vector u.
  rep.zero_class.assign(classes, false);
  std::vector<detail::ResidueEvaluator> modp;
  for (const auto& f : S.polys()) modp.emplace_back(f, pm, static_cast<std::int64_t>(pm));
  std::vector<std::int64_t> uvec(n);
  NeumaierSum Ssum, Sigma;
  for (std::uint64_t u = 0; u < classes; ++u) {
    std::uint64_t rest = u;
    for (std::size_t i = 0; i < n; ++i) {
      uvec[i] = static_cast<std::int64_t>(rest % pm);
      rest /= pm;
    }
    bool zero = true;
    for (const auto& e : modp) zero = zero && e(uvec.data()) == 0;
    const double v = ups[u].value();
    rep.upsilon.push_back(v);
    rep.zero_class[u] = zero;
    const double dev = v - rep.main_term;
    Sigma.add(dev * dev);
    if (zero) {
      ++rep.zero_classes;
      Ssum.add(dev);
    }
  }
  rep.S = Ssum.value();
  rep.Sigma = Sigma.value();
  rep.empty = rep.zero_classes == 0;

  NeumaierSum aug, sq;
  for (const auto& b : bucket) {
    const double A = b.value();
    aug.add((A - rep.main_term) * (A - rep.main_term));
    sq.add(A * A);
  }
  rep.Sigma_augmented = aug.value();
  rep.bucket_square_sum = sq.value();
  const double expanded = rep.bucket_square_sum - rep.main_term * rep.mass;
  rep.cross_cancel = std::abs(rep.Sigma_augmented - expanded) / std::max(std::abs(rep.Sigma_augmented), 1e-300);

  rep.N_W = weighted_count(S, B, plan.q_vector, W, CountOptions{opt.enum_budget}).weighted;
  NeumaierSum split;
  for (std::uint64_t u = 0; u < classes; ++u)
    if (rep.zero_class[u]) split.add(rep.upsilon[u]);
  rep.split_residual = std::abs(rep.N_W - split.value()) / std::max(std::abs(rep.N_W), 1.0);
  rep.cauchy_ok = rep.S * rep.S <= static_cast<double>(rep.zero_classes) * rep.Sigma * (1.0 + 1e-12) + 1e-12;
  return rep;
}

// ---------------------------------------------------------------------------
// Congruence asymptotic residual.

struct PropReport {
  PrimeTuple primes;
  std::optional<ModulusPlan> plan;
  int s = -1;          // max over i <= m of s_{p_i}(hat f_i)
  Rational R = 0;
  double N_W = 0.0;
  double mass = 0.0;
  double main_term = 0.0;  // mass / Q
  double lhs = 0.0;
  double envelope1 = 0.0;  // B^n xi^{-R} (xi/B)^{(n-s-2)/2^m}
  double envelope2 = 0.0;  // B^n xi^{-r/2} (xi/B)^{(n-s-1)/2}
};

inline PropReport prop_residual(const PolySystem& S, double B, const PrimeTuple& t, const WeightSpec& W,
                                const EngineOptions& opt = {}) {
  if (W.dim() != S.nvars()) throw InvalidInput("weight dimension differs from the variable count");
  PropReport rep;
  rep.primes = t;
  const double n = static_cast<double>(S.nvars());
  rep.mass = weight_mass(W, B, CountOptions{opt.enum_budget});
  if (S.empty()) {
    rep.N_W = rep.mass;
    rep.main_term = rep.mass;
    rep.lhs = 0.0;
    rep.envelope1 = rep.envelope2 = std::pow(B, n);
    return rep;
  }
  const ProfileOptions popt{false, true, opt.budget};
  for (unsigned i = 0; i <= t.m; ++i) {
    const VarietyProfile full = variety_profile(S, t.p(i), popt);
    if (full.degenerate || full.rho != static_cast<int>(S.size()))
      throw HypothesisFailure("rho_p != r at p = " + std::to_string(t.p(i)));
    const PolySystem hat = S.suffix(i);
    if (!hat.empty()) rep.s = std::max(rep.s, variety_profile(hat, t.p(i), popt).s);
  }
  rep.plan = modulus_plan(t, S);
  const auto sizes = S.group_sizes();
  std::vector<unsigned> rs;
  for (unsigned d = 2; d <= S.max_degree(); ++d) rs.push_back(static_cast<unsigned>(d < sizes.size() ? sizes[d] : 0));
  rep.R = script_R_kappa(rs, t.m).R;
  rep.N_W = weighted_count(S, B, rep.plan->q_vector, W, CountOptions{opt.enum_budget}).weighted;
  rep.main_term = rep.mass / to_double(Rational(rep.plan->Q));
  rep.lhs = std::abs(rep.N_W - rep.main_term);
  const double xi = t.xi;
  const double s = rep.s;
  const double r = static_cast<double>(S.size());
  rep.envelope1 = std::pow(B, n) * std::pow(xi, -to_double(rep.R)) * std::pow(xi / B, (n - s - 2) / std::pow(2.0, t.m));
  rep.envelope2 = std::pow(B, n) * std::pow(xi, -r / 2) * std::pow(xi / B, (n - s - 1) / 2);
  return rep;
}

inline PropReport prop_residual(const PolySystem& S, double B, double xi, unsigned m, const WeightSpec& W,
                                const EngineOptions& opt = {}) {
  if (xi < std::sqrt(B) - 1e-9 || xi > B + 1e-9) throw InvalidInput("xi must lie in [B^(1/2), B]");
  return prop_residual(S, B, select_primes(S, xi, m, opt), W, opt);
}

}  // namespace vdc
