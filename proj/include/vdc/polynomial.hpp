#pragma once

// Sparse multivariate polynomials over Z with exact coefficients.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vdc/errors.hpp"
#include "vdc/integer.hpp"

namespace vdc {

/// Exponent vector x^alpha. Length is the ambient variable count.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<unsigned> exps) : exps_(std::move(exps)) {}

  static Monomial variable(std::size_t nvars, std::size_t i, unsigned e = 1) {
    Monomial m(nvars);
    m.exps_.at(i) = e;
    return m;
  }

  std::size_t nvars() const { return exps_.size(); }
  unsigned operator[](std::size_t i) const { return exps_[i]; }
  unsigned& operator[](std::size_t i) { return exps_[i]; }
  const std::vector<unsigned>& exponents() const { return exps_; }

  unsigned total_degree() const {
    unsigned d = 0;
    for (unsigned e : exps_) d += e;
    return d;
  }

  Monomial operator*(const Monomial& o) const {
    Monomial r = *this;
    for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] += o.exps_[i];
    return r;
  }

  bool operator==(const Monomial&) const = default;

 private:
  std::vector<unsigned> exps_;
};

/// Graded reverse lexicographic order. `grevlex_less(a, b)` is true when a < b.
inline bool grevlex_less(const Monomial& a, const Monomial& b) {
  const unsigned da = a.total_degree();
  const unsigned db = b.total_degree();
  if (da != db) return da < db;
  for (std::size_t i = a.nvars(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

/// Map comparator placing the grevlex-largest monomial first.
struct GrevlexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const { return grevlex_less(b, a); }
};

/// Degree of a polynomial; the zero polynomial has no degree.
using Degree = std::optional<unsigned>;

class Polynomial {
 public:
  using TermMap = std::map<Monomial, Integer, GrevlexDescending>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : n_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Integer& c) {
    Polynomial p(nvars);
    p.add_term(Monomial(nvars), c);
    return p;
  }

  static Polynomial variable(std::size_t nvars, std::size_t i) {
    Polynomial p(nvars);
    p.add_term(Monomial::variable(nvars, i), 1);
    return p;
  }

  static Polynomial monomial(const Monomial& m, const Integer& c) {
    Polynomial p(m.nvars());
    p.add_term(m, c);
    return p;
  }

  std::size_t nvars() const { return n_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Degree degree() const {
    if (terms_.empty()) return std::nullopt;
    // Grevlex is graded, so the first term has maximal total degree.
    return terms_.begin()->first.total_degree();
  }

  void add_term(const Monomial& m, const Integer& c) {
    if (m.nvars() != n_) throw InvalidInput("monomial length does not match variable count");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Integer coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Integer(0) : it->second;
  }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    const unsigned d = terms_.begin()->first.total_degree();
    return std::all_of(terms_.begin(), terms_.end(),
                       [d](const auto& t) { return t.first.total_degree() == d; });
  }

  Polynomial homogeneous_part(unsigned d) const {
    Polynomial r(n_);
    for (const auto& [m, c] : terms_)
      if (m.total_degree() == d) r.terms_.emplace_hint(r.terms_.end(), m, c);
    return r;
  }

  /// Largest variable index occurring in some term, or nullopt for constants.
  std::optional<std::size_t> max_variable() const {
    std::optional<std::size_t> best;
    for (const auto& [m, c] : terms_)
      for (std::size_t i = n_; i-- > 0;)
        if (m[i] != 0) {
          if (!best || i > *best) best = i;
          break;
        }
    return best;
  }

  Polynomial derivative(std::size_t var) const {
    Polynomial r(n_);
    for (const auto& [m, c] : terms_) {
      if (m[var] == 0) continue;
      Monomial mm = m;
      mm[var] -= 1;
      r.add_term(mm, c * m[var]);
    }
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }

  Polynomial& operator*=(const Integer& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Integer& s) { return a *= s; }
  friend Polynomial operator*(const Integer& s, Polynomial a) { return a *= s; }
  Polynomial operator-() const { return *this * Integer(-1); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_compatible(b);
    Polynomial r(a.n_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }

  bool operator==(const Polynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }

  template <typename T>
  Integer evaluate(std::span<const T> x) const {
    if (x.size() != n_) throw InvalidInput("evaluation point has wrong dimension");
    Integer total = 0;
    for (const auto& [m, c] : terms_) {
      Integer t = c;
      for (std::size_t i = 0; i < n_; ++i)
        if (m[i] != 0) t *= ipow(Integer(x[i]), m[i]);
      total += t;
    }
    return total;
  }

  Integer evaluate(const std::vector<Integer>& x) const {
    return evaluate(std::span<const Integer>(x));
  }
  Integer evaluate(const std::vector<std::int64_t>& x) const {
    return evaluate(std::span<const std::int64_t>(x));
  }

  /// Canonical text: `c*x1^e1*...` terms in grevlex order, e.g. `x1^2 + 2*x2 - 3`.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      Integer mag = c < 0 ? Integer(-c) : c;
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      const bool is_const = m.total_degree() == 0;
      bool need_star = false;
      if (mag != 1 || is_const) {
        os << mag;
        need_star = true;
      }
      for (std::size_t i = 0; i < n_; ++i) {
        if (m[i] == 0) continue;
        if (need_star) os << "*";
        os << "x" << (i + 1);
        if (m[i] > 1) os << "^" << m[i];
        need_star = true;
      }
    }
    return os.str();
  }

 private:
  void check_compatible(const Polynomial& o) const {
    if (o.n_ != n_) throw InvalidInput("polynomials live in different variable counts");
  }

  std::size_t n_ = 0;
  TermMap terms_;
};

inline Polynomial pow(const Polynomial& f, unsigned e) {
  Polynomial result = Polynomial::constant(f.nvars(), 1);
  Polynomial b = f;
  while (e != 0) {
    if (e & 1U) result = result * b;
    e >>= 1U;
    if (e != 0) b = b * b;
  }
  return result;
}

/// Homogeneous part of top degree. Throws on the zero polynomial.
inline Polynomial leading_form(const Polynomial& f) {
  const Degree d = f.degree();
  if (!d) throw InvalidInput("leading form of the zero polynomial is undefined");
  return f.homogeneous_part(*d);
}

/// Gradient vector (partial derivatives in variable order).
inline std::vector<Polynomial> gradient(const Polynomial& f) {
  std::vector<Polynomial> g;
  g.reserve(f.nvars());
  for (std::size_t i = 0; i < f.nvars(); ++i) g.push_back(f.derivative(i));
  return g;
}

/// Substitute x_i -> images[i]; all images share one variable count.
inline Polynomial substitute(const Polynomial& f, std::span<const Polynomial> images) {
  if (images.size() != f.nvars()) throw InvalidInput("substitution needs one image per variable");
  const std::size_t m = images.empty() ? 0 : images.front().nvars();
  for (const auto& g : images)
    if (g.nvars() != m) throw InvalidInput("substitution images disagree on variable count");

  // Powers are cached per variable; a term is a product of cached powers.
  std::vector<std::vector<Polynomial>> powers(images.size());
  auto power_of = [&](std::size_t i, unsigned e) -> const Polynomial& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(Polynomial::constant(m, 1));
    while (cache.size() <= e) cache.push_back(cache.back() * images[i]);
    return cache[e];
  };

  Polynomial result(m);
  for (const auto& [mono, c] : f.terms()) {
    Polynomial t = Polynomial::constant(m, c);
    for (std::size_t i = 0; i < f.nvars(); ++i)
      if (mono[i] != 0) t = t * power_of(i, mono[i]);
    result += t;
  }
  return result;
}

/// f(x + shift), expanded.
inline Polynomial translate(const Polynomial& f, std::span<const Integer> shift) {
  if (shift.size() != f.nvars()) throw InvalidInput("shift has wrong dimension");
  std::vector<Polynomial> images;
  images.reserve(f.nvars());
  for (std::size_t i = 0; i < f.nvars(); ++i)
    images.push_back(Polynomial::variable(f.nvars(), i) + Polynomial::constant(f.nvars(), shift[i]));
  return substitute(f, images);
}

/// van der Corput difference f(x + p*y) - f(x).
inline Polynomial difference(const Polynomial& f, std::span<const Integer> y, const Integer& p) {
  if (y.size() != f.nvars()) throw InvalidInput("difference direction has wrong dimension");
  if (p < 1) throw InvalidInput("difference step must be positive");
  std::vector<Integer> shift(y.begin(), y.end());
  for (auto& s : shift) s *= p;
  return translate(f, shift) - f;
}

inline Polynomial difference(const Polynomial& f, const std::vector<Integer>& y, const Integer& p) {
  return difference(f, std::span<const Integer>(y), p);
}

/// Directional derivative sum_k y_k dF/dx_k.
inline Polynomial directional_derivative(const Polynomial& f, std::span<const Integer> y) {
  if (y.size() != f.nvars()) throw InvalidInput("direction has wrong dimension");
  Polynomial r(f.nvars());
  for (std::size_t k = 0; k < f.nvars(); ++k)
    if (y[k] != 0) r += f.derivative(k) * y[k];
  return r;
}

/// True when the leading form is annihilated by y . grad, i.e. the difference
/// drops more than one degree.
inline bool is_degenerate_direction(const Polynomial& f, std::span<const Integer> y) {
  return directional_derivative(leading_form(f), y).is_zero();
}

}  // namespace vdc
