#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace latgauss::ring {

/// Parameters of the truncated polynomial ring Z[X]/(X^N - 1) and its
/// quotients mod q (large, power of two by default) and mod p (small).
struct RingParams {
  int n = 0;
  long long q = 2048;
  long long p = 3;

  void validate() const {
    if (n < 2) throw std::invalid_argument("ring degree N must be >= 2");
    if (q < 16) throw std::invalid_argument("large modulus q must be >= 16");
    // q*q must fit comfortably below the __int128 accumulator headroom.
    if (q > (1LL << 31)) throw std::invalid_argument("q above 2^31 is not supported");
    if (p < 2) throw std::invalid_argument("small modulus p must be >= 2");
    if (std::gcd(p, q) != 1) throw std::invalid_argument("p and q must be coprime");
  }
};

/// Element of Z[X]/(X^N - 1): coefficient of X^i at index i, length N.
struct RingElement {
  std::vector<long long> coeffs;

  int degree_bound() const { return static_cast<int>(coeffs.size()); }

  bool operator==(const RingElement& other) const = default;
};

inline RingElement zero_element(int n) {
  return RingElement{std::vector<long long>(static_cast<std::size_t>(n), 0)};
}

inline RingElement one_element(int n) {
  RingElement e = zero_element(n);
  e.coeffs[0] = 1;
  return e;
}

/// X^k as a ring element.
inline RingElement monomial(int n, int k, long long c = 1) {
  RingElement e = zero_element(n);
  e.coeffs[static_cast<std::size_t>(k % n)] = c;
  return e;
}

namespace detail {

inline void require_same_n(const RingElement& a, const RingElement& b) {
  if (a.coeffs.size() != b.coeffs.size())
    throw std::invalid_argument("ring elements have different degree bounds");
}

inline long long checked_narrow(__int128 v) {
  if (v > std::numeric_limits<long long>::max() ||
      v < std::numeric_limits<long long>::min())
    throw std::overflow_error("ring coefficient exceeds 64-bit range");
  return static_cast<long long>(v);
}

}  // namespace detail

inline RingElement add(const RingElement& a, const RingElement& b) {
  detail::require_same_n(a, b);
  RingElement r = a;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
    r.coeffs[i] = detail::checked_narrow(static_cast<__int128>(a.coeffs[i]) +
                                         b.coeffs[i]);
  }
  return r;
}

inline RingElement sub(const RingElement& a, const RingElement& b) {
  detail::require_same_n(a, b);
  RingElement r = a;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
    r.coeffs[i] = detail::checked_narrow(static_cast<__int128>(a.coeffs[i]) -
                                         b.coeffs[i]);
  }
  return r;
}

inline RingElement negate(const RingElement& a) {
  RingElement r = a;
  for (auto& c : r.coeffs) c = -c;
  return r;
}

inline RingElement scale(const RingElement& a, long long s) {
  RingElement r = a;
  for (auto& c : r.coeffs)
    c = detail::checked_narrow(static_cast<__int128>(c) * s);
  return r;
}

/// Cyclic convolution: result_k = sum over i+j == k (mod N) of a_i * b_j.
/// Exact integer arithmetic with 128-bit accumulators; throws on any
/// result coefficient outside the 64-bit range instead of wrapping.
inline RingElement mul(const RingElement& a, const RingElement& b) {
  detail::require_same_n(a, b);
  const std::size_t n = a.coeffs.size();
  std::vector<__int128> acc(2 * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const long long ai = a.coeffs[i];
    if (ai == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      acc[i + j] += static_cast<__int128>(ai) * b.coeffs[j];
    }
  }
  RingElement r = zero_element(static_cast<int>(n));
  for (std::size_t k = 0; k < n; ++k) {
    r.coeffs[k] = detail::checked_narrow(acc[k] + acc[k + n]);
  }
  return r;
}

/// Coefficient-wise reduction mod m. centered=false maps into [0, m),
/// centered=true into (-m/2, m/2].
inline RingElement reduce_mod(const RingElement& a, long long m, bool centered) {
  if (m < 2) throw std::invalid_argument("modulus must be >= 2");
  RingElement r = a;
  for (auto& c : r.coeffs) {
    long long v = c % m;
    if (v < 0) v += m;
    if (centered && 2 * v > m) v -= m;
    c = v;
  }
  return r;
}

inline bool is_zero(const RingElement& a) {
  for (long long c : a.coeffs)
    if (c != 0) return false;
  return true;
}

inline long long l1_norm(const RingElement& a) {
  long long s = 0;
  for (long long c : a.coeffs) s += c < 0 ? -c : c;
  return s;
}

inline long long linf_norm(const RingElement& a) {
  long long s = 0;
  for (long long c : a.coeffs) {
    long long v = c < 0 ? -c : c;
    if (v > s) s = v;
  }
  return s;
}

namespace detail {

// Dense polynomials over Z_m for the inversion routines. Coefficients
// are kept in [0, m); degree is tracked implicitly by trimming.

using ZmPoly = std::vector<long long>;

inline int zm_degree(const ZmPoly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (f[static_cast<std::size_t>(i)] != 0) return i;
  return -1;
}

inline long long mod_pow(long long base, long long exp, long long m) {
  long long r = 1 % m;
  base %= m;
  if (base < 0) base += m;
  while (exp > 0) {
    if (exp & 1) r = static_cast<long long>((__int128)r * base % m);
    base = static_cast<long long>((__int128)base * base % m);
    exp >>= 1;
  }
  return r;
}

// Inverse of a unit in Z_m for prime m (Fermat).
inline long long zm_inverse(long long a, long long m) {
  return mod_pow(a, m - 2, m);
}

// f -= s * X^shift * g   (mod m), in place. Grows f if needed.
inline void zm_submul(ZmPoly& f, const ZmPoly& g, long long s, int shift,
                      long long m) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == 0) continue;
    std::size_t k = i + static_cast<std::size_t>(shift);
    if (k >= f.size()) f.resize(k + 1, 0);
    __int128 v = static_cast<__int128>(f[k]) - static_cast<__int128>(s) * g[i];
    long long w = static_cast<long long>(v % m);
    if (w < 0) w += m;
    f[k] = w;
  }
}

// Extended Euclid in GF(m)[X], m prime: returns t with
// t * a == gcd(a, mod_poly) (mod mod_poly). gcd is left in r0.
struct XgcdResult {
  ZmPoly gcd;
  ZmPoly t;  // cofactor of a
};

inline XgcdResult zm_xgcd(ZmPoly a, ZmPoly mod_poly, long long m) {
  const std::size_t width = mod_poly.size();
  ZmPoly r0 = std::move(mod_poly);
  ZmPoly r1 = std::move(a);
  r1.resize(width, 0);
  ZmPoly t0(width, 0), t1(width, 0);
  t1[0] = 1;
  while (zm_degree(r1) >= 0) {
    int d0 = zm_degree(r0);
    int d1 = zm_degree(r1);
    if (d0 < d1) {
      std::swap(r0, r1);
      std::swap(t0, t1);
      continue;
    }
    long long lead1_inv = zm_inverse(r1[static_cast<std::size_t>(d1)], m);
    // One division step per loop pass keeps the code short; the degree
    // of r0 drops by at least one each pass.
    long long s = static_cast<long long>(
        (__int128)r0[static_cast<std::size_t>(d0)] * lead1_inv % m);
    zm_submul(r0, r1, s, d0 - d1, m);
    zm_submul(t0, t1, s, d0 - d1, m);
    if (zm_degree(r0) < zm_degree(r1)) {
      std::swap(r0, r1);
      std::swap(t0, t1);
    }
  }
  return XgcdResult{std::move(r0), std::move(t0)};
}

// Cyclic convolution with reduction mod m on writeback. Inputs are
// first reduced into [0, m) so the accumulator stays within range for
// any m <= 2^32.
inline ZmPoly zm_cyclic_mul(const ZmPoly& a, const ZmPoly& b, long long m) {
  const std::size_t n = a.size();
  std::vector<__int128> acc(2 * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    long long ai = a[i] % m;
    if (ai < 0) ai += m;
    if (ai == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      long long bj = b[j] % m;
      if (bj < 0) bj += m;
      acc[i + j] += static_cast<__int128>(ai) * bj;
    }
  }
  ZmPoly r(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    r[k] = static_cast<long long>((acc[k] + acc[k + n]) % m);
  }
  return r;
}

inline bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

inline bool is_small_prime(long long v) {
  if (v < 2) return false;
  for (long long d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

// Inverse of a in GF(m)[X]/(X^N - 1), m prime.
inline std::optional<ZmPoly> invert_mod_prime(const ZmPoly& a, int n, long long m) {
  ZmPoly mod_poly(static_cast<std::size_t>(n) + 1, 0);
  mod_poly[0] = m - 1;  // -1 mod m
  mod_poly[static_cast<std::size_t>(n)] = 1;
  ZmPoly aw(a.begin(), a.end());
  aw.resize(static_cast<std::size_t>(n) + 1, 0);
  for (auto& c : aw) {
    c %= m;
    if (c < 0) c += m;
  }
  XgcdResult res = zm_xgcd(std::move(aw), std::move(mod_poly), m);
  int gd = zm_degree(res.gcd);
  if (gd != 0) return std::nullopt;  // shares a factor with X^N - 1
  long long g_inv = zm_inverse(res.gcd[0], m);
  ZmPoly out(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < res.t.size(); ++i) {
    if (res.t[i] == 0) continue;
    std::size_t k = i % static_cast<std::size_t>(n);  // fold X^N -> 1
    out[k] = static_cast<long long>(
        ((__int128)out[k] + (__int128)res.t[i] * g_inv) % m);
  }
  return out;
}

}  // namespace detail

/// Inverse of a in (Z/m)[X]/(X^N - 1). m must be a small prime or a
/// power of two. For powers of two the inverse mod 2 is Hensel-lifted
/// by Newton iteration b <- b (2 - a b); for primes, extended Euclid
/// against X^N - 1. Returns nullopt when a is not invertible, which a
/// caller such as key generation treats as "resample".
inline std::optional<RingElement> invert_mod(const RingElement& a, long long m) {
  if (m < 2) throw std::invalid_argument("modulus must be >= 2");
  const int n = a.degree_bound();
  detail::ZmPoly aw(a.coeffs.begin(), a.coeffs.end());
  std::optional<detail::ZmPoly> inv;
  if (detail::is_power_of_two(m)) {
    inv = detail::invert_mod_prime(aw, n, 2);
    if (inv) {
      long long modulus = 2;
      while (modulus < m) {
        // Newton step doubles the precision: correct mod 2^k before,
        // correct mod 2^2k after.
        __int128 sq = static_cast<__int128>(modulus) * modulus;
        modulus = sq >= m ? m : static_cast<long long>(sq);
        detail::ZmPoly ab = detail::zm_cyclic_mul(aw, *inv, modulus);
        detail::ZmPoly two_minus(ab.size(), 0);
        for (std::size_t i = 0; i < ab.size(); ++i) {
          long long v = -ab[i];
          if (i == 0) v += 2;
          v %= modulus;
          if (v < 0) v += modulus;
          two_minus[i] = v;
        }
        inv = detail::zm_cyclic_mul(*inv, two_minus, modulus);
      }
    }
  } else if (detail::is_small_prime(m)) {
    inv = detail::invert_mod_prime(aw, n, m);
  } else {
    throw std::invalid_argument("modulus must be prime or a power of two");
  }
  if (!inv) return std::nullopt;
  RingElement out = zero_element(n);
  out.coeffs.assign(inv->begin(), inv->end());
  return reduce_mod(out, m, /*centered=*/true);
}

/// One-line text form: N space-separated signed decimal coefficients,
/// X^0 first.
inline std::string to_line(const RingElement& a) {
  std::ostringstream os;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (i) os << ' ';
    os << a.coeffs[i];
  }
  return os.str();
}

inline RingElement parse_line(const std::string& line, int expected_n = -1) {
  std::istringstream is(line);
  RingElement e;
  long long v;
  while (is >> v) e.coeffs.push_back(v);
  if (!is.eof()) throw std::invalid_argument("malformed coefficient line");
  if (e.coeffs.empty()) throw std::invalid_argument("empty coefficient line");
  if (expected_n >= 0 && e.degree_bound() != expected_n)
    throw std::invalid_argument("coefficient count does not match N");
  return e;
}

}  // namespace latgauss::ring
