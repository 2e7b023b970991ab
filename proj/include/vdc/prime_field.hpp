#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "vdc/errors.hpp"

namespace vdc {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1U) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1U;
  }
  return r;
}

/// Inverse modulo a prime p; a must be nonzero mod p.
inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Primes in [lo, hi] by a segmented sieve of Eratosthenes.
inline std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (hi < 2 || lo > hi) return out;
  if (lo < 2) lo = 2;
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi))) + 1;
  std::vector<char> small(root + 1, 1);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
  }
  constexpr std::uint64_t kSegment = 1U << 16;
  std::vector<char> seg;
  for (std::uint64_t low = lo; low <= hi; low += kSegment) {
    const std::uint64_t high = std::min(hi, low + kSegment - 1);
    seg.assign(high - low + 1, 1);
    for (std::uint64_t p : base) {
      if (p * p > high) break;
      std::uint64_t start = std::max(p * p, (low + p - 1) / p * p);
      for (std::uint64_t j = start; j <= high; j += p) seg[j - low] = 0;
    }
    for (std::uint64_t i = low; i <= high; ++i)
      if (seg[i - low]) out.push_back(i);
    if (high == hi) break;
  }
  return out;
}

/// The field F_{p^k}, k small, with elements encoded as integers 0..q-1
/// (base-p digits are coefficients of 1, t, t^2, ...). Arithmetic uses full
/// addition and multiplication tables, so q is capped.
class ExtensionField {
 public:
  static constexpr std::uint64_t kMaxOrder = 4096;

  ExtensionField(std::uint32_t p, unsigned k) : p_(p), k_(k) {
    if (!is_prime(p)) throw InvalidInput("field characteristic must be prime");
    if (k == 0) throw InvalidInput("extension degree must be positive");
    std::uint64_t q = 1;
    for (unsigned i = 0; i < k; ++i) {
      q *= p;
      if (q > kMaxOrder) throw ResourceExhausted("extension field F_{" + std::to_string(p) + "^" +
                                                 std::to_string(k) + "} exceeds table cap");
    }
    q_ = static_cast<std::uint32_t>(q);
    modulus_ = find_irreducible();
    build_tables();
  }

  std::uint32_t characteristic() const { return p_; }
  unsigned degree() const { return k_; }
  std::uint32_t order() const { return q_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return add_[a * q_ + b]; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return mul_[a * q_ + b]; }
  std::uint32_t neg(std::uint32_t a) const { return neg_[a]; }

  /// Embedding of a prime-field residue.
  std::uint32_t from_base(std::uint64_t c) const { return static_cast<std::uint32_t>(c % p_); }

  std::uint32_t inverse(std::uint32_t a) const {
    if (a == 0) throw InvalidInput("inverse of zero");
    return inv_[a];
  }

 private:
  using Coeffs = std::vector<std::uint32_t>;  // little-endian, length k

  Coeffs decode(std::uint32_t a) const {
    Coeffs c(k_);
    for (unsigned i = 0; i < k_; ++i) {
      c[i] = a % p_;
      a /= p_;
    }
    return c;
  }

  std::uint32_t encode(const Coeffs& c) const {
    std::uint32_t a = 0;
    for (unsigned i = k_; i-- > 0;) a = a * p_ + c[i];
    return a;
  }

  // Monic polynomial of degree k without roots or factors of degree <= k/2.
  Coeffs find_irreducible() const {
    if (k_ == 1) return {0};
    for (std::uint32_t code = 0; code < q_; ++code) {
      Coeffs low = decode(code);  // t^k + sum low[i] t^i
      if (is_irreducible(low)) return low;
    }
    throw InvalidInput("no irreducible polynomial found");
  }

  bool is_irreducible(const Coeffs& low) const {
    std::vector<std::uint32_t> f(low.begin(), low.end());
    f.push_back(1);
    // Trial division by all monic polynomials of degree 1..k/2.
    for (unsigned d = 1; 2 * d <= k_; ++d) {
      std::uint64_t count = 1;
      for (unsigned i = 0; i < d; ++i) count *= p_;
      for (std::uint64_t code = 0; code < count; ++code) {
        std::vector<std::uint32_t> g(d + 1);
        std::uint64_t c = code;
        for (unsigned i = 0; i < d; ++i) {
          g[i] = static_cast<std::uint32_t>(c % p_);
          c /= p_;
        }
        g[d] = 1;
        if (divides(g, f)) return false;
      }
    }
    return true;
  }

  bool divides(const std::vector<std::uint32_t>& g, std::vector<std::uint32_t> f) const {
    const std::size_t dg = g.size() - 1;
    for (std::size_t i = f.size(); i-- > dg;) {
      const std::uint32_t c = f[i];
      if (c == 0) continue;
      for (std::size_t j = 0; j <= dg; ++j)
        f[i - dg + j] = static_cast<std::uint32_t>((f[i - dg + j] + p_ - (c * g[j]) % p_) % p_);
    }
    for (std::size_t i = 0; i < dg; ++i)
      if (f[i] != 0) return false;
    return true;
  }

  void build_tables() {
    add_.resize(static_cast<std::size_t>(q_) * q_);
    mul_.resize(static_cast<std::size_t>(q_) * q_);
    neg_.resize(q_);
    inv_.assign(q_, 0);
    std::vector<Coeffs> dec(q_);
    for (std::uint32_t a = 0; a < q_; ++a) dec[a] = decode(a);
    for (std::uint32_t a = 0; a < q_; ++a) {
      Coeffs n(k_);
      for (unsigned i = 0; i < k_; ++i) n[i] = (p_ - dec[a][i]) % p_;
      neg_[a] = encode(n);
      for (std::uint32_t b = 0; b < q_; ++b) {
        Coeffs s(k_);
        for (unsigned i = 0; i < k_; ++i) s[i] = (dec[a][i] + dec[b][i]) % p_;
        add_[a * q_ + b] = encode(s);
        mul_[a * q_ + b] = encode(multiply(dec[a], dec[b]));
      }
    }
    for (std::uint32_t a = 1; a < q_; ++a)
      for (std::uint32_t b = 1; b < q_; ++b)
        if (mul_[a * q_ + b] == 1) {
          inv_[a] = b;
          break;
        }
  }

  Coeffs multiply(const Coeffs& a, const Coeffs& b) const {
    std::vector<std::uint64_t> prod(2 * k_, 0);
    for (unsigned i = 0; i < k_; ++i)
      for (unsigned j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p_;
    // Reduce with t^k = -sum modulus_[i] t^i.
    for (std::size_t d = 2 * k_; d-- > k_;) {
      const std::uint64_t c = prod[d];
      if (c == 0) continue;
      prod[d] = 0;
      for (unsigned i = 0; i < k_; ++i)
        prod[d - k_ + i] = (prod[d - k_ + i] + (p_ - modulus_[i]) % p_ * c) % p_;
    }
    Coeffs r(k_);
    for (unsigned i = 0; i < k_; ++i) r[i] = static_cast<std::uint32_t>(prod[i]);
    return r;
  }

  std::uint32_t p_;
  unsigned k_;
  std::uint32_t q_ = 0;
  Coeffs modulus_;
  std::vector<std::uint32_t> add_, mul_, neg_, inv_;
};

}  // namespace vdc
