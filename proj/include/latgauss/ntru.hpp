#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "latgauss/mcmc.hpp"
#include "latgauss/ring.hpp"
#include "latgauss/rng.hpp"

namespace latgauss::ntru {

/// Thrown when key generation runs out of resampling attempts; usually
/// means the Gaussian width is too large for the chosen q.
class KeygenExhausted : public std::runtime_error {
 public:
  explicit KeygenExhausted(const std::string& what)
      : std::runtime_error(what) {}
};

struct KeygenPolicy {
  double key_sigma = 1.2;   // Gaussian width for f and g coefficients
  int max_resamples = 100;
  bool margin_check = true;

  void validate() const {
    if (!(key_sigma > 0.0))
      throw std::invalid_argument("key sigma must be positive");
    if (max_resamples < 1)
      throw std::invalid_argument("max resamples must be >= 1");
  }
};

struct NtruKeyPair {
  ring::RingParams params;
  ring::RingElement f;        // private
  ring::RingElement g;        // private
  ring::RingElement f_inv_q;  // f^-1 mod q
  ring::RingElement f_inv_p;  // f^-1 mod p
  ring::RingElement h;        // public: p * f^-1 * g mod q, centered
};

namespace detail {

inline ring::RingElement draw_small(int n, double sigma, Rng& seeder) {
  ring::RingElement e;
  e.coeffs = mcmc::sample_small_polynomial(n, sigma, seeder.raw());
  return e;
}

inline bool is_ternary(const ring::RingElement& a) {
  for (long long c : a.coeffs)
    if (c < -1 || c > 1) return false;
  return true;
}

}  // namespace detail

/// Worst-case decryption headroom of a key pair against ternary
/// blinding and message polynomials: any coefficient of p*r*g + f*m is
/// bounded by p*|g|_1 + |f|_1, so this staying below q/2 guarantees
/// correct decryption for every ternary (m, r).
inline bool satisfies_worst_case_margin(const ring::RingElement& f,
                                        const ring::RingElement& g,
                                        const ring::RingParams& params) {
  const long long bound = params.p * ring::l1_norm(g) + ring::l1_norm(f);
  return 2 * bound < params.q;
}

/// Key generation driven by the MCMC discrete Gaussian sampler.
/// f is redrawn until invertible mod q and mod p; with margin_check on,
/// (f, g) pairs are redrawn until the worst-case bound holds.
inline NtruKeyPair keygen(const ring::RingParams& params,
                          const KeygenPolicy& policy, std::uint64_t seed) {
  params.validate();
  policy.validate();
  Rng seeder(seed);

  NtruKeyPair kp;
  kp.params = params;
  int attempts = 0;
  for (;;) {
    if (++attempts > policy.max_resamples)
      throw KeygenExhausted(
          "key generation exhausted " + std::to_string(policy.max_resamples) +
          " resampling attempts; lower key-sigma or raise q");
    ring::RingElement f = detail::draw_small(params.n, policy.key_sigma, seeder);
    auto inv_q = ring::invert_mod(f, params.q);
    if (!inv_q) continue;
    auto inv_p = ring::invert_mod(f, params.p);
    if (!inv_p) continue;
    ring::RingElement g = detail::draw_small(params.n, policy.key_sigma, seeder);
    if (policy.margin_check && !satisfies_worst_case_margin(f, g, params))
      continue;
    kp.f = std::move(f);
    kp.g = std::move(g);
    kp.f_inv_q = std::move(*inv_q);
    kp.f_inv_p = std::move(*inv_p);
    break;
  }
  kp.h = ring::reduce_mod(ring::scale(ring::mul(kp.f_inv_q, kp.g), params.p),
                          params.q, /*centered=*/true);
  return kp;
}

/// e = r*h + m mod q (centered). m and r must be ternary.
inline ring::RingElement encrypt(const ring::RingElement& h,
                                 const ring::RingElement& m,
                                 const ring::RingElement& r,
                                 const ring::RingParams& params) {
  if (!detail::is_ternary(m))
    throw std::invalid_argument("message coefficients must lie in {-1,0,1}");
  if (!detail::is_ternary(r))
    throw std::invalid_argument("blinding coefficients must lie in {-1,0,1}");
  return ring::reduce_mod(ring::add(ring::mul(r, h), m), params.q,
                          /*centered=*/true);
}

/// a = f*e mod q (centered), then m = f_inv_p * a mod p (centered).
inline ring::RingElement decrypt(const NtruKeyPair& kp,
                                 const ring::RingElement& e) {
  ring::RingElement a =
      ring::reduce_mod(ring::mul(kp.f, e), kp.params.q, /*centered=*/true);
  return ring::reduce_mod(ring::mul(kp.f_inv_p, a), kp.params.p,
                          /*centered=*/true);
}

/// q/2 minus the largest coefficient magnitude of p*r*g + f*m, computed
/// over the integers. Positive margin guarantees decrypt(encrypt(.))
/// recovers m exactly.
inline double decryption_margin(const NtruKeyPair& kp,
                                const ring::RingElement& m,
                                const ring::RingElement& r) {
  ring::RingElement t =
      ring::add(ring::scale(ring::mul(r, kp.g), kp.params.p),
                ring::mul(kp.f, m));
  return 0.5 * static_cast<double>(kp.params.q) -
         static_cast<double>(ring::linf_norm(t));
}

/// Uniform ternary polynomial, for messages and blinding factors.
inline ring::RingElement random_ternary(int n, Rng& rng) {
  ring::RingElement e = ring::zero_element(n);
  for (auto& c : e.coeffs) c = static_cast<long long>(rng.below(3)) - 1;
  return e;
}

}  // namespace latgauss::ntru
