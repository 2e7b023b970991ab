#pragma once

// Smooth compactly supported weights W: R^n -> R together with the class
// data (radius R, derivative bounds kappa_j) tracked through translation,
// restriction, products and linear changes of variables.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vdc/errors.hpp"

namespace vdc {

/// Compensated (Neumaier) summation.
class NeumaierSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  void add(const NeumaierSum& o) {
    add(o.sum_);
    add(o.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// The one-variable bump w(t) = exp(-1/(1-t^2)) on |t| < 1, zero elsewhere.
inline double bump(double t) {
  const double u = 1.0 - t * t;
  return u > 0.0 ? std::exp(-1.0 / u) : 0.0;
}

/// k-th derivative of the bump. With u = 1 - t^2 one has
/// w^(k) = P_k(t) u^{-2k} w, where P_0 = 1 and
/// P_{k+1} = u (P_k' u + 4 k t P_k) - 2 t P_k.
class BumpDerivatives {
 public:
  explicit BumpDerivatives(unsigned kmax) {
    polys_.push_back({1.0});
    for (unsigned k = 0; k < kmax; ++k) polys_.push_back(next(polys_.back(), k));
  }

  unsigned max_order() const { return static_cast<unsigned>(polys_.size() - 1); }

  double operator()(unsigned k, double t) const {
    const double u = 1.0 - t * t;
    if (u <= 0.0) return 0.0;
    const auto& P = polys_.at(k);
    double v = 0.0;
    for (std::size_t i = P.size(); i-- > 0;) v = v * t + P[i];
    return v * std::pow(u, -2.0 * k) * std::exp(-1.0 / u);
  }

  /// max over |t| < 1 of |w^(k)(t)| sampled on a grid of the given step.
  double sup(unsigned k, double step = 1e-3) const {
    double best = 0.0;
    const long steps = static_cast<long>(std::lround(1.0 / step));
    for (long i = -steps + 1; i < steps; ++i) best = std::max(best, std::abs((*this)(k, i * step)));
    return best;
  }

 private:
  using Poly = std::vector<double>;  // coefficients in t, ascending

  static Poly mul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
  }
  static Poly add(Poly a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
  }
  static Poly deriv(const Poly& a) {
    if (a.size() <= 1) return {0.0};
    Poly r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * static_cast<double>(i);
    return r;
  }
  static Poly next(const Poly& P, unsigned k) {
    const Poly u{1.0, 0.0, -1.0};
    const Poly inner = add(mul(deriv(P), u), mul(Poly{0.0, 4.0 * k}, P));
    return add(mul(u, inner), mul(Poly{0.0, -2.0}, P));
  }

  std::vector<Poly> polys_;
};

enum class WeightKind { PaperBump, Product, Indicator, Custom };

inline std::string to_string(WeightKind k) {
  switch (k) {
    case WeightKind::PaperBump: return "paper-bump";
    case WeightKind::Product: return "product-of-1d";
    case WeightKind::Indicator: return "indicator";
    case WeightKind::Custom: return "custom";
  }
  return "unknown";
}

/// A weight together with class data: support in [-R, R]^n and
/// |d^j W| <= kappa[j] for the tracked orders j < kappa.size().
class WeightSpec {
 public:
  using Factor = std::function<double(double)>;
  using Function = std::function<double(std::span<const double>)>;

  /// W(t) = prod_i w(t_i / 2), the weight used with the congruence counts.
  static WeightSpec paper_bump(std::size_t n, unsigned jmax = 4) {
    const BumpDerivatives d(jmax);
    std::vector<double> m;  // sup |d^k/dt^k w(t/2)| = 2^{-k} sup |w^(k)|
    for (unsigned k = 0; k <= jmax; ++k) m.push_back(std::ldexp(d.sup(k), -static_cast<int>(k)));
    WeightSpec w;
    w.kind_ = WeightKind::PaperBump;
    w.n_ = n;
    w.radius_ = 2.0;
    w.factors_.assign(n, [](double t) { return bump(t / 2.0); });
    w.kappa_ = product_kappa(std::vector<std::vector<double>>(n, m), jmax);
    w.min_on_unit_box_ = std::pow(bump(0.5), static_cast<double>(n));
    w.label_ = "paper-bump";
    return w;
  }

  /// W(t) = prod_i phi_i(t_i) with per-factor radius and derivative sups.
  static WeightSpec product(std::vector<Factor> factors, double radius, std::vector<double> kappa,
                            std::string label = "product-of-1d") {
    WeightSpec w;
    w.kind_ = WeightKind::Product;
    w.n_ = factors.size();
    w.radius_ = radius;
    w.factors_ = std::move(factors);
    w.kappa_ = std::move(kappa);
    w.label_ = std::move(label);
    return w;
  }

  /// 0/1 indicator of the box [-1, 1]^n. Not smooth; it turns weighted
  /// counts into plain congruence counts and is used as a testing surrogate.
  static WeightSpec indicator(std::size_t n) {
    WeightSpec w;
    w.kind_ = WeightKind::Indicator;
    w.n_ = n;
    w.radius_ = 1.0;
    w.factors_.assign(n, [](double t) { return std::abs(t) <= 1.0 + 1e-12 ? 1.0 : 0.0; });
    w.kappa_ = {1.0};
    w.min_on_unit_box_ = 1.0;
    w.label_ = "indicator";
    return w;
  }

  static WeightSpec custom(std::size_t n, Function fn, double radius, std::vector<double> kappa,
                           std::string label = "custom") {
    WeightSpec w;
    w.kind_ = WeightKind::Custom;
    w.n_ = n;
    w.radius_ = radius;
    w.fn_ = std::move(fn);
    w.kappa_ = std::move(kappa);
    w.label_ = std::move(label);
    return w;
  }

  WeightKind kind() const { return kind_; }
  std::size_t dim() const { return n_; }
  double radius() const { return radius_; }
  const std::vector<double>& kappa() const { return kappa_; }
  const std::string& label() const { return label_; }
  bool is_product() const { return !factors_.empty(); }
  const std::vector<Factor>& factors() const { return factors_; }

  /// min of W over [-1, 1]^n when known; N(f,B) <= N_W(f,B,q) / min for q = 1.
  std::optional<double> min_on_unit_box() const { return min_on_unit_box_; }

  double operator()(std::span<const double> t) const {
    if (t.size() != n_) throw InvalidInput("weight evaluated at a point of wrong dimension");
    if (!factors_.empty()) {
      double v = 1.0;
      for (std::size_t i = 0; i < n_ && v != 0.0; ++i) v *= factors_[i](t[i]);
      return v;
    }
    return fn_ ? fn_(t) : 1.0;
  }
  double operator()(const std::vector<double>& t) const { return (*this)(std::span<const double>(t)); }

  /// Returns a copy with every kappa_j multiplied by c (metadata only).
  WeightSpec with_kappa_scaled(double c) const {
    WeightSpec w = *this;
    for (auto& k : w.kappa_) k *= c;
    return w;
  }

  /// x -> W(x + u); radius grows by |u|, derivative bounds unchanged.
  WeightSpec translated(std::vector<double> u) const {
    if (u.size() != n_) throw InvalidInput("translation has wrong dimension");
    double norm = 0.0;
    for (double v : u) norm = std::max(norm, std::abs(v));
    WeightSpec w = *this;
    w.kind_ = kind_ == WeightKind::Indicator ? WeightKind::Indicator : WeightKind::Custom;
    w.radius_ = radius_ + norm;
    w.min_on_unit_box_.reset();
    w.label_ = label_ + "|translated";
    if (!factors_.empty()) {
      w.factors_.clear();
      for (std::size_t i = 0; i < n_; ++i) w.factors_.push_back([f = factors_[i], s = u[i]](double t) { return f(t + s); });
      w.kind_ = kind_ == WeightKind::Indicator ? WeightKind::Indicator : WeightKind::Product;
    } else {
      w.fn_ = [base = *this, u](std::span<const double> t) {
        std::vector<double> s(t.begin(), t.end());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += u[i];
        return base(s);
      };
    }
    return w;
  }

  /// x' -> W(x', x) in n - 1 variables; class data unchanged.
  WeightSpec restricted(double x) const {
    if (n_ == 0) throw InvalidInput("cannot restrict a weight in zero variables");
    WeightSpec w = *this;
    w.n_ = n_ - 1;
    w.min_on_unit_box_.reset();
    w.label_ = label_ + "|restricted";
    if (!factors_.empty()) {
      const double last = factors_.back()(x);
      w.factors_.pop_back();
      if (w.factors_.empty()) {
        w.fn_ = [last](std::span<const double>) { return last; };
      } else {
        w.factors_.front() = [f = factors_.front(), last](double t) { return f(t) * last; };
      }
      w.kind_ = WeightKind::Product;
    } else {
      w.kind_ = WeightKind::Custom;
      w.fn_ = [base = *this, x](std::span<const double> t) {
        std::vector<double> s(t.begin(), t.end());
        s.push_back(x);
        return base(s);
      };
    }
    return w;
  }

  /// Pointwise product; radius is the smaller one and
  /// kappa''_j = sum_{i<=j} C(j,i) kappa_i kappa'_{j-i} (Leibniz).
  WeightSpec times(const WeightSpec& o) const {
    if (o.n_ != n_) throw InvalidInput("product of weights in different dimensions");
    WeightSpec w;
    w.n_ = n_;
    w.radius_ = std::min(radius_, o.radius_);
    const std::size_t J = std::min(kappa_.size(), o.kappa_.size());
    for (std::size_t j = 0; j < J; ++j) {
      double s = 0.0;
      double binom = 1.0;
      for (std::size_t i = 0; i <= j; ++i) {
        s += binom * kappa_[i] * o.kappa_[j - i];
        binom = binom * static_cast<double>(j - i) / static_cast<double>(i + 1);
      }
      w.kappa_.push_back(s);
    }
    w.label_ = label_ + "*" + o.label_;
    if (!factors_.empty() && !o.factors_.empty()) {
      w.kind_ = WeightKind::Product;
      for (std::size_t i = 0; i < n_; ++i)
        w.factors_.push_back([a = factors_[i], b = o.factors_[i]](double t) { return a(t) * b(t); });
    } else {
      w.kind_ = WeightKind::Custom;
      w.fn_ = [a = *this, b = o](std::span<const double> t) { return a(t) * b(t); };
    }
    return w;
  }

  /// x -> W(M x) for invertible M. With ||M|| the largest absolute entry,
  /// kappa'_j = (n ||M||)^j kappa_j and R' = n ||M^{-1}|| R.
  WeightSpec composed(const std::vector<std::vector<double>>& M) const {
    if (M.size() != n_) throw InvalidInput("matrix has wrong size");
    for (const auto& row : M)
      if (row.size() != n_) throw InvalidInput("matrix is not square");
    const auto inv = inverse(M);
    const double norm = max_abs(M);
    const double inv_norm = max_abs(inv);
    WeightSpec w;
    w.kind_ = WeightKind::Custom;
    w.n_ = n_;
    w.radius_ = static_cast<double>(n_) * inv_norm * radius_;
    for (std::size_t j = 0; j < kappa_.size(); ++j)
      w.kappa_.push_back(std::pow(static_cast<double>(n_) * norm, static_cast<double>(j)) * kappa_[j]);
    w.label_ = label_ + "|composed";
    w.fn_ = [base = *this, M](std::span<const double> t) {
      std::vector<double> s(M.size(), 0.0);
      for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t k = 0; k < M.size(); ++k) s[i] += M[i][k] * t[k];
      return base(s);
    };
    return w;
  }

 private:
  WeightSpec() = default;

  // kappa_j of prod_i phi_i(t_i) from per-factor sups m[i][k] = sup |phi_i^(k)|:
  // the max over multi-indices of order j of prod_i m[i][alpha_i].
  static std::vector<double> product_kappa(const std::vector<std::vector<double>>& m, unsigned jmax) {
    // best[j] after processing some factors = max product with total order j.
    std::vector<double> best(jmax + 1, 0.0);
    best[0] = 1.0;
    for (const auto& fac : m) {
      std::vector<double> next(jmax + 1, 0.0);
      for (unsigned j = 0; j <= jmax; ++j)
        for (unsigned k = 0; k <= j && k < fac.size(); ++k) next[j] = std::max(next[j], best[j - k] * fac[k]);
      best = std::move(next);
    }
    return best;
  }

  static double max_abs(const std::vector<std::vector<double>>& M) {
    double m = 0.0;
    for (const auto& row : M)
      for (double v : row) m = std::max(m, std::abs(v));
    return m;
  }

  static std::vector<std::vector<double>> inverse(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < n; ++r)
        if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
      if (std::abs(a[piv][c]) < 1e-300) throw InvalidInput("matrix is singular");
      std::swap(a[piv], a[c]);
      std::swap(inv[piv], inv[c]);
      const double d = a[c][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[c][k] /= d;
        inv[c][k] /= d;
      }
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c || a[r][c] == 0.0) continue;
        const double f = a[r][c];
        for (std::size_t k = 0; k < n; ++k) {
          a[r][k] -= f * a[c][k];
          inv[r][k] -= f * inv[c][k];
        }
      }
    }
    return inv;
  }

  WeightKind kind_ = WeightKind::Custom;
  std::size_t n_ = 0;
  double radius_ = 0.0;
  std::vector<double> kappa_;
  std::vector<Factor> factors_;
  Function fn_;
  std::optional<double> min_on_unit_box_;
  std::string label_;
};

/// Finite-difference estimate of kappa_j(W) for j <= 2: the largest absolute
/// partial derivative of order j over a grid of [-R, R]^n.
inline double estimate_kappa(const WeightSpec& W, unsigned j, double step, double h = 1e-4) {
  if (j > 2) throw InvalidInput("finite-difference estimate only tracks orders up to 2");
  const std::size_t n = W.dim();
  const double R = W.radius();
  const long per_axis = static_cast<long>(std::floor(2.0 * R / step)) + 1;
  std::vector<long> idx(n, 0);
  std::vector<double> t(n);
  double best = 0.0;
  auto at = [&](std::vector<double> s) { return W(s); };
  while (true) {
    for (std::size_t i = 0; i < n; ++i) t[i] = -R + step * static_cast<double>(idx[i]);
    if (j == 0) {
      best = std::max(best, std::abs(at(t)));
    } else if (j == 1) {
      for (std::size_t a = 0; a < n; ++a) {
        auto p = t, m = t;
        p[a] += h;
        m[a] -= h;
        best = std::max(best, std::abs((at(p) - at(m)) / (2 * h)));
      }
    } else {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
          double v;
          if (a == b) {
            auto p = t, m = t;
            p[a] += h;
            m[a] -= h;
            v = (at(p) - 2 * at(t) + at(m)) / (h * h);
          } else {
            auto pp = t, pm = t, mp = t, mm = t;
            pp[a] += h, pp[b] += h;
            pm[a] += h, pm[b] -= h;
            mp[a] -= h, mp[b] += h;
            mm[a] -= h, mm[b] -= h;
            v = (at(pp) - at(pm) - at(mp) + at(mm)) / (4 * h * h);
          }
          best = std::max(best, std::abs(v));
        }
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == n) break;
  }
  return best;
}

}  // namespace vdc
