#pragma once

// Exponent formulas for the point-count bounds, in exact rational arithmetic.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vdc/errors.hpp"
#include "vdc/integer.hpp"

namespace vdc {

struct ExponentReport {
  std::map<std::string, std::string> inputs;
  Rational eta = 0;
  Rational exponent = 0;   // power of B in the bound
  bool admissible = false;
  std::string violated;    // the failed condition when not admissible
  Rational D_prime = 0;    // sum (d-1) r_d over d < D plus D r_D
  Rational Delta = 0;
  Rational total_degree = 0;  // sum of all degrees
  Rational threshold = 0;     // n must exceed this
};

namespace detail {

inline Rational pow2(int e) {
  if (e >= 0) return Rational(Integer(1) << e);
  return Rational(Integer(1), Integer(1) << -e);
}

inline std::string join(const std::vector<unsigned>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace detail

/// Same-degree bound: eta = K / (n + K - 1) with K = 2^{d-2}(d-1)r, exponent
/// n - r d (1 - eta), admissible iff n > K.
inline ExponentReport eta_same(unsigned n, unsigned r, unsigned d) {
  if (d < 4) throw InvalidInput("degree must be at least 4");
  if (r < 1) throw InvalidInput("need at least one equation");
  if (n < 1) throw InvalidInput("need at least one variable");
  ExponentReport out;
  out.inputs = {{"n", std::to_string(n)}, {"r", std::to_string(r)}, {"d", std::to_string(d)}};
  const Rational K = detail::pow2(static_cast<int>(d) - 2) * (d - 1) * r;
  out.threshold = K;
  out.eta = K / (Rational(n) + K - 1);
  out.D_prime = Rational(r * d);
  out.Delta = Rational((d - 1) * r);
  out.total_degree = Rational(r * d);
  out.exponent = Rational(n) - Rational(r * d) * (1 - out.eta);
  out.admissible = Rational(n) > K;
  if (!out.admissible) out.violated = "n > 2^(d-2)(d-1)r";
  return out;
}

/// Mixed-degree bound. `rs[k]` is r_{k+2}, so D = rs.size() + 1.
inline ExponentReport exponents_mixed(unsigned n, const std::vector<unsigned>& rs) {
  if (rs.size() + 1 < 4) throw InvalidInput("maximal degree must be at least 4");
  if (rs.back() < 1) throw InvalidInput("need r_D >= 1");
  const unsigned D = static_cast<unsigned>(rs.size()) + 1;
  ExponentReport out;
  out.inputs = {{"n", std::to_string(n)}, {"r_d", detail::join(rs)}, {"D", std::to_string(D)}};
  Rational Dp = 0, Delta = 0, total = 0;
  for (unsigned d = 2; d < D; ++d) {
    const unsigned rd = rs[d - 2];
    Dp += Rational((d - 1) * rd);
    Delta += (Rational(d - 2) + detail::pow2(1 - static_cast<int>(d))) * rd;
    total += Rational(d * rd);
  }
  Dp += Rational(D * rs.back());
  Delta += Rational((D - 1) * rs.back());
  total += Rational(D * rs.back());
  const Rational K = detail::pow2(static_cast<int>(D) - 2) * Delta;
  out.D_prime = Dp;
  out.Delta = Delta;
  out.total_degree = total;
  out.threshold = K;
  out.eta = K / (Rational(n) + K - 1);
  out.exponent = Rational(n) - Dp * (1 - out.eta);
  out.admissible = Rational(n) > K;
  if (!out.admissible) out.violated = "n > 2^(D-2) Delta";
  return out;
}

struct RKappa {
  Rational R = 0;      // the saving exponent in the main error term
  Rational kappa = 0;  // Q is of size xi^kappa
};

/// `rs[k]` is r_{k+2}; 0 <= m <= D - 2.
inline RKappa script_R_kappa(const std::vector<unsigned>& rs, unsigned m) {
  const unsigned D = static_cast<unsigned>(rs.size()) + 1;
  if (rs.empty()) throw InvalidInput("empty degree profile");
  if (m + 2 > D) throw InvalidInput("need m <= D - 2");
  RKappa out;
  for (unsigned i = 2; i <= D; ++i) {
    const unsigned ri = rs[i - 2];
    if (i <= m + 1) {
      out.R += (1 - detail::pow2(1 - static_cast<int>(i))) * ri;
      out.kappa += Rational((i - 1) * ri);
    } else {
      out.R += Rational(ri);
      out.kappa += Rational((m + 2) * ri);
    }
  }
  return out;
}

/// Smallest n with n > s* + 2^{d-1}(d-1) r (r+1).
inline Integer birch_threshold(unsigned d, unsigned r, const Integer& s_star) {
  if (d < 2) throw InvalidInput("degree must be at least 2");
  return s_star + (Integer(1) << (d - 1)) * (d - 1) * r * (r + 1) + 1;
}

/// Minimal admissible n for the three criteria side by side.
struct ThresholdComparison {
  Integer birch;        // from the s* criterion
  Integer same_degree;  // n > 2^{d-2}(d-1) r
  Integer mixed;        // n > 2^{D-2} Delta for the same data viewed as one group
};

inline ThresholdComparison compare_thresholds(unsigned d, unsigned r, const Integer& s_star) {
  ThresholdComparison c;
  c.birch = birch_threshold(d, r, s_star);
  c.same_degree = (Integer(1) << (d >= 2 ? d - 2 : 0)) * (d - 1) * r + 1;
  if (d >= 4) {
    std::vector<unsigned> rs(d - 1, 0);
    rs.back() = r;
    const Rational K = exponents_mixed(1, rs).threshold;
    const Integer num = boost::multiprecision::numerator(K);
    const Integer den = boost::multiprecision::denominator(K);
    c.mixed = num / den + 1;  // floor(K) + 1
  } else {
    c.mixed = c.same_degree;
  }
  return c;
}

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  std::vector<double> residuals;  // log N - fitted value, per row
};

/// Least-squares slope of log N against log B.
inline SlopeFit empirical_slope(const std::vector<std::pair<double, double>>& rows) {
  if (rows.size() < 3) throw InvalidInput("need at least three (B, N) rows");
  std::vector<double> xs, ys;
  for (const auto& [b, n] : rows) {
    if (b <= 0.0 || n <= 0.0) throw InvalidInput("B and N must be positive");
    xs.push_back(std::log(b));
    ys.push_back(std::log(n));
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw InvalidInput("all rows share the same B");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    fit.residuals.push_back(e);
    ss_res += e * e;
  }
  fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

}  // namespace vdc
