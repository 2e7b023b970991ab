#pragma once

// Box enumeration for N(f,B), N(f,B,q) and weighted counts N_W(f,B,q).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vdc/errors.hpp"
#include "vdc/integer.hpp"
#include "vdc/parallel.hpp"
#include "vdc/polynomial.hpp"
#include "vdc/system.hpp"
#include "vdc/weight.hpp"

namespace vdc {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 1'000'000'000;

struct CountOptions {
  std::uint64_t budget = kDefaultEnumerationBudget;
};

struct CountResult {
  std::uint64_t count = 0;     // number of lattice points meeting the conditions
  double weighted = 0.0;       // sum of weights over those points (weighted counts only)
  std::uint64_t visited = 0;   // nodes of the enumeration tree that were evaluated
  std::string mode;            // "exhaustive" or "modular-reject"
};

namespace detail {

// One condition "f(x) = 0" (modulus 0) or "f(x) = 0 mod q" for a member,
// evaluated on integer points with |x_i| <= L.
class MemberKernel {
 public:
  MemberKernel(const Polynomial& f, const Integer& modulus, std::int64_t L) : n_(f.nvars()), L_(L) {
    if (modulus < 0) throw InvalidInput("modulus must be positive");
    level_ = f.max_variable().has_value() ? static_cast<int>(*f.max_variable()) : -1;
    unsigned maxdeg = 0;
    for (const auto& [m, c] : f.terms()) {
      exps_.push_back(m.exponents());
      coeffs_.push_back(c);
      maxdeg = std::max(maxdeg, m.total_degree());
    }
    maxe_ = 0;
    for (const auto& e : exps_)
      for (unsigned v : e) maxe_ = std::max(maxe_, v);
    const std::size_t width = static_cast<std::size_t>(2 * L + 1);
    if (modulus == 0) {
      // Exact test; use 128-bit arithmetic when sum |c| L^deg stays below 2^120.
      Integer bound = 0;
      for (const auto& c : coeffs_) bound += abs(c) * ipow(Integer(std::max<std::int64_t>(L, 1)), maxdeg);
      fast128_ = bound < (Integer(1) << 120);
      if (fast128_) {
        for (const auto& c : coeffs_) c128_.push_back(to_i128(c));
        pow128_.assign(width * (maxe_ + 1), 0);
        for (std::int64_t x = -L; x <= L; ++x) {
          __int128 acc = 1;
          for (unsigned e = 0; e <= maxe_; ++e) {
            pow128_[static_cast<std::size_t>(x + L) * (maxe_ + 1) + e] = acc;
            if (e < maxe_) acc *= x;
          }
        }
      }
    } else {
      modular_ = true;
      if (modulus > (Integer(1) << 62)) throw InvalidInput("modulus exceeds 2^62");
      q_ = static_cast<std::uint64_t>(modulus);
      for (const auto& c : coeffs_) cmod_.push_back(mod_floor(c, q_));
      powq_.assign(width * (maxe_ + 1), 0);
      for (std::int64_t x = -L; x <= L; ++x) {
        const std::uint64_t r = mod_floor(x, q_);
        std::uint64_t acc = 1 % q_;
        for (unsigned e = 0; e <= maxe_; ++e) {
          powq_[static_cast<std::size_t>(x + L) * (maxe_ + 1) + e] = acc;
          acc = static_cast<std::uint64_t>(static_cast<unsigned __int128>(acc) * r % q_);
        }
      }
    }
  }

  int level() const { return level_; }

  bool satisfied(const std::int64_t* x) const {
    if (modular_) {
      if (q_ == 1) return true;
      unsigned __int128 total = 0;
      for (std::size_t t = 0; t < exps_.size(); ++t) {
        unsigned __int128 v = cmod_[t];
        for (std::size_t i = 0; i < n_ && v != 0; ++i)
          if (exps_[t][i] != 0) v = v * powq_[static_cast<std::size_t>(x[i] + L_) * (maxe_ + 1) + exps_[t][i]] % q_;
        total += v;
        if (total >= (static_cast<unsigned __int128>(1) << 126)) total %= q_;
      }
      return total % q_ == 0;
    }
    if (fast128_) {
      __int128 total = 0;
      for (std::size_t t = 0; t < exps_.size(); ++t) {
        __int128 v = c128_[t];
        for (std::size_t i = 0; i < n_; ++i)
          if (exps_[t][i] != 0) v *= pow128_[static_cast<std::size_t>(x[i] + L_) * (maxe_ + 1) + exps_[t][i]];
        total += v;
      }
      return total == 0;
    }
    Integer total = 0;
    for (std::size_t t = 0; t < exps_.size(); ++t) {
      Integer v = coeffs_[t];
      for (std::size_t i = 0; i < n_; ++i)
        if (exps_[t][i] != 0) v *= ipow(Integer(x[i]), exps_[t][i]);
      total += v;
    }
    return total == 0;
  }

 private:
  static __int128 to_i128(const Integer& c) {
    const bool neg = c < 0;
    Integer mag = neg ? Integer(-c) : c;
    unsigned __int128 v = 0;
    v = static_cast<unsigned __int128>(static_cast<std::uint64_t>(mag >> 64)) << 64;
    v |= static_cast<std::uint64_t>(mag & Integer(std::numeric_limits<std::uint64_t>::max()));
    const auto s = static_cast<__int128>(v);
    return neg ? -s : s;
  }

  std::size_t n_;
  std::int64_t L_;
  int level_ = -1;
  unsigned maxe_ = 0;
  std::vector<std::vector<unsigned>> exps_;
  std::vector<Integer> coeffs_;
  bool modular_ = false;
  bool fast128_ = false;
  std::uint64_t q_ = 0;
  std::vector<std::uint64_t> cmod_, powq_;
  std::vector<__int128> c128_, pow128_;
};

struct Partial {
  std::uint64_t count = 0;
  NeumaierSum weighted;
  std::uint64_t visited = 0;
};

// Enumerates [-L, L]^n, pruning as soon as a member whose variables are all
// assigned fails. The first coordinate is split across workers.
class BoxEnumerator {
 public:
  BoxEnumerator(std::size_t n, std::int64_t L, std::vector<MemberKernel> kernels, const WeightSpec* weight, double B)
      : n_(n), L_(L), weight_(weight), B_(B) {
    by_level_.resize(n);
    for (auto& k : kernels) {
      if (k.level() < 0)
        constants_.push_back(std::move(k));
      else
        by_level_[static_cast<std::size_t>(k.level())].push_back(std::move(k));
    }
    if (weight_ != nullptr && weight_->is_product()) {
      const std::size_t width = static_cast<std::size_t>(2 * L + 1);
      factor_table_.assign(n, std::vector<double>(width));
      for (std::size_t i = 0; i < n; ++i)
        for (std::int64_t x = -L; x <= L; ++x)
          factor_table_[i][static_cast<std::size_t>(x + L)] = weight_->factors()[i](static_cast<double>(x) / B_);
    }
  }

  Partial run() const {
    Partial total;
    for (const auto& k : constants_) {
      std::int64_t dummy = 0;
      if (!k.satisfied(&dummy)) return total;
    }
    if (n_ == 0) {
      total.count = 1;
      total.visited = 1;
      if (weight_ != nullptr) total.weighted.add((*weight_)(std::vector<double>{}));
      return total;
    }
    const auto parts = parallel_map<Partial>(static_cast<std::size_t>(2 * L_ + 1), [&](std::size_t i) {
      Partial part;
      std::vector<std::int64_t> x(n_, 0);
      x[0] = static_cast<std::int64_t>(i) - L_;
      descend(0, x, 1.0, part);
      return part;
    });
    for (const auto& p : parts) {
      total.count += p.count;
      total.visited += p.visited;
      total.weighted.add(p.weighted);
    }
    return total;
  }

 private:
  void descend(std::size_t level, std::vector<std::int64_t>& x, double partial_weight, Partial& out) const {
    ++out.visited;
    if (!factor_table_.empty()) {
      partial_weight *= factor_table_[level][static_cast<std::size_t>(x[level] + L_)];
      if (partial_weight == 0.0) return;
    }
    for (const auto& k : by_level_[level])
      if (!k.satisfied(x.data())) return;
    if (level + 1 == n_) {
      ++out.count;
      if (weight_ != nullptr) {
        if (!factor_table_.empty()) {
          out.weighted.add(partial_weight);
        } else {
          std::vector<double> t(n_);
          for (std::size_t i = 0; i < n_; ++i) t[i] = static_cast<double>(x[i]) / B_;
          out.weighted.add((*weight_)(t));
        }
      }
      return;
    }
    for (std::int64_t v = -L_; v <= L_; ++v) {
      x[level + 1] = v;
      descend(level + 1, x, partial_weight, out);
    }
  }

  std::size_t n_;
  std::int64_t L_;
  const WeightSpec* weight_;
  double B_;
  std::vector<MemberKernel> constants_;
  std::vector<std::vector<MemberKernel>> by_level_;
  std::vector<std::vector<double>> factor_table_;
};

inline void check_budget(std::size_t n, std::int64_t L, std::uint64_t budget) {
  long double pts = 1;
  for (std::size_t i = 0; i < n; ++i) pts *= static_cast<long double>(2 * L + 1);
  if (pts > static_cast<long double>(budget))
    throw ResourceExhausted("enumeration of " + std::to_string(static_cast<double>(pts)) +
                            " points exceeds the budget of " + std::to_string(budget));
}

inline std::vector<Integer> expand_moduli(std::size_t r, std::span<const Integer> moduli) {
  if (moduli.size() == 1) return std::vector<Integer>(r, moduli[0]);
  if (moduli.size() != r) throw InvalidInput("need one modulus per member or a single modulus");
  return {moduli.begin(), moduli.end()};
}

}  // namespace detail

/// N(f,B): integer points with |x| <= B on which every member vanishes.
inline CountResult count_points(const PolySystem& s, std::int64_t B, const CountOptions& opt = {}) {
  if (B < 0) throw InvalidInput("B must be non-negative");
  detail::check_budget(s.nvars(), B, opt.budget);
  std::vector<detail::MemberKernel> ks;
  for (const auto& f : s.polys()) ks.emplace_back(f, Integer(0), B);
  const auto part = detail::BoxEnumerator(s.nvars(), B, std::move(ks), nullptr, static_cast<double>(std::max<std::int64_t>(B, 1))).run();
  return {part.count, 0.0, part.visited, "exhaustive"};
}

/// N(f,B,q): |x| <= B with q_i | f_i(x); `moduli` holds one modulus per member
/// or a single modulus for all of them.
inline CountResult count_congruence(const PolySystem& s, std::int64_t B, std::span<const Integer> moduli,
                                    const CountOptions& opt = {}) {
  if (B < 0) throw InvalidInput("B must be non-negative");
  const auto q = detail::expand_moduli(s.size(), moduli);
  for (const auto& m : q)
    if (m <= 0) throw InvalidInput("moduli must be positive");
  detail::check_budget(s.nvars(), B, opt.budget);
  std::vector<detail::MemberKernel> ks;
  for (std::size_t i = 0; i < s.size(); ++i) ks.emplace_back(s[i], q[i], B);
  const auto part = detail::BoxEnumerator(s.nvars(), B, std::move(ks), nullptr, static_cast<double>(std::max<std::int64_t>(B, 1))).run();
  return {part.count, 0.0, part.visited, "modular-reject"};
}

inline CountResult count_congruence(const PolySystem& s, std::int64_t B, const Integer& q, const CountOptions& opt = {}) {
  const std::vector<Integer> one{q};
  return count_congruence(s, B, one, opt);
}

inline double weight_eval(const WeightSpec& W, std::span<const double> t) { return W(t); }

/// Lattice points that can carry weight: |x| <= floor(R B).
inline std::int64_t support_box(const WeightSpec& W, double B) {
  return static_cast<std::int64_t>(std::floor(W.radius() * B + 1e-9));
}

/// sum over x in Z^n of W(x / B).
inline double weight_mass(const WeightSpec& W, double B, const CountOptions& opt = {}) {
  if (B < 1.0) throw InvalidInput("B must be at least 1");
  const std::int64_t L = support_box(W, B);
  if (W.is_product()) {
    double total = 1.0;
    for (const auto& f : W.factors()) {
      NeumaierSum s;
      for (std::int64_t x = -L; x <= L; ++x) s.add(f(static_cast<double>(x) / B));
      total *= s.value();
    }
    return total;
  }
  detail::check_budget(W.dim(), L, opt.budget);
  return detail::BoxEnumerator(W.dim(), L, {}, &W, B).run().weighted.value();
}

/// N_W(f,B,q) = sum over x with q_i | f_i(x) of W(x / B).
inline CountResult weighted_count(const PolySystem& s, double B, std::span<const Integer> moduli, const WeightSpec& W,
                                  const CountOptions& opt = {}) {
  if (B < 1.0) throw InvalidInput("B must be at least 1");
  if (W.dim() != s.nvars()) throw InvalidInput("weight dimension differs from the variable count");
  const auto q = detail::expand_moduli(s.size(), moduli.empty() ? std::span<const Integer>() : moduli);
  for (const auto& m : q)
    if (m <= 0) throw InvalidInput("moduli must be positive");
  const std::int64_t L = support_box(W, B);
  detail::check_budget(s.nvars(), L, opt.budget);
  std::vector<detail::MemberKernel> ks;
  for (std::size_t i = 0; i < s.size(); ++i) ks.emplace_back(s[i], q[i], L);
  const auto part = detail::BoxEnumerator(s.nvars(), L, std::move(ks), &W, B).run();
  return {part.count, part.weighted.value(), part.visited, "modular-reject"};
}

inline CountResult weighted_count(const PolySystem& s, double B, const Integer& q, const WeightSpec& W,
                                  const CountOptions& opt = {}) {
  const std::vector<Integer> one{q};
  return weighted_count(s, B, one, W, opt);
}

struct PoissonReport {
  double lhs = 0.0;        // sum_x W(x/B) sum_y W((x + a y)/B)
  double main_term = 0.0;  // a^{-n} (sum_x W(x/B))^2
  double residual = 0.0;   // lhs - main_term
  double mass = 0.0;
  unsigned N = 0;          // order reported with the envelope
  double envelope = 0.0;   // kappa_0 kappa_N B^{2n-N} a^{N-n} + kappa_N^2 B^{2(n-N)} a^{N-n}
};

/// Double sum of the lattice {(x, x + a y)}. Grouping x by its class c mod a
/// gives lhs = sum_c S_c^2 with S_c the weight of the class, and the residual
/// is computed as sum_c (S_c - mass/a^n)^2, which avoids cancellation and is
/// exactly 0 for a = 1.
inline PoissonReport poisson_residual(const WeightSpec& W, double B, std::int64_t a, unsigned N,
                                      const CountOptions& opt = {}) {
  if (a < 1 || static_cast<double>(a) > B) throw InvalidInput("need 1 <= a <= B");
  const std::size_t n = W.dim();
  const std::int64_t L = support_box(W, B);
  detail::check_budget(n, L, opt.budget);
  std::size_t classes = 1;
  for (std::size_t i = 0; i < n; ++i) classes *= static_cast<std::size_t>(a);
  std::vector<NeumaierSum> S(classes);
  std::vector<std::int64_t> x(n, -L);
  std::vector<double> t(n);
  while (n > 0) {
    std::size_t cls = 0;
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = static_cast<double>(x[i]) / B;
      cls = cls * static_cast<std::size_t>(a) + static_cast<std::size_t>(((x[i] % a) + a) % a);
    }
    const double w = W(t);
    if (w != 0.0) S[cls].add(w);
    std::size_t k = n;
    while (k > 0 && ++x[k - 1] > L) x[--k] = -L;
    if (k == 0) break;
  }
  PoissonReport out;
  NeumaierSum mass;
  for (const auto& s : S) mass.add(s.value());
  out.mass = mass.value();
  const double mean = out.mass / static_cast<double>(classes);
  NeumaierSum lhs, res;
  for (const auto& s : S) {
    const double v = s.value();
    lhs.add(v * v);
    res.add((v - mean) * (v - mean));
  }
  out.lhs = lhs.value();
  out.main_term = out.mass * out.mass / static_cast<double>(classes);
  out.residual = res.value();
  out.N = N;
  if (N < W.kappa().size()) {
    const double k0 = W.kappa()[0];
    const double kN = W.kappa()[N];
    const double dn = static_cast<double>(n);
    const double dN = static_cast<double>(N);
    const double ad = std::pow(static_cast<double>(a), dN - dn);
    out.envelope = k0 * kN * std::pow(B, 2 * dn - dN) * ad + kN * kN * std::pow(B, 2 * (dn - dN)) * ad;
  }
  return out;
}

}  // namespace vdc
