#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "latgauss/ntru.hpp"
#include "latgauss/ring.hpp"
#include "latgauss/rng.hpp"

using namespace latgauss;

namespace {

const ring::RingParams kSmall{64, 2048, 3};
const ring::RingParams kStandard{256, 2048, 3};

void check_invariants(const ntru::NtruKeyPair& kp) {
  const auto one = ring::one_element(kp.params.n);
  REQUIRE(ring::reduce_mod(ring::mul(kp.f, kp.f_inv_q), kp.params.q, false) ==
          one);
  REQUIRE(ring::reduce_mod(ring::mul(kp.f, kp.f_inv_p), kp.params.p, false) ==
          one);
  // f*h == p*g (mod q)
  const auto lhs = ring::mul(kp.f, kp.h);
  const auto rhs = ring::scale(kp.g, kp.params.p);
  REQUIRE(ring::is_zero(
      ring::reduce_mod(ring::sub(lhs, rhs), kp.params.q, false)));
}

}  // namespace

TEST_CASE("keygen satisfies the inverse and public-key invariants") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const auto kp = ntru::keygen(kStandard, {}, seed);
    check_invariants(kp);
  }
}

TEST_CASE("keygen is deterministic per seed") {
  const auto a = ntru::keygen(kSmall, {}, 42);
  const auto b = ntru::keygen(kSmall, {}, 42);
  REQUIRE(a.f == b.f);
  REQUIRE(a.g == b.g);
  REQUIRE(a.h == b.h);
  const auto c = ntru::keygen(kSmall, {}, 43);
  REQUIRE(a.f != c.f);
}

TEST_CASE("keygen succeeds within budget on at least 99 of 100 seeds") {
  int successes = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    try {
      ntru::keygen(kStandard, {}, seed);
      ++successes;
    } catch (const ntru::KeygenExhausted&) {
    }
  }
  REQUIRE(successes >= 99);
}

TEST_CASE("keygen exhausts when the width cannot satisfy the margin") {
  ntru::KeygenPolicy policy;
  policy.key_sigma = 30.0;
  REQUIRE_THROWS_AS(ntru::keygen(kSmall, policy, 1), ntru::KeygenExhausted);
}

TEST_CASE("encrypt edge cases") {
  const auto kp = ntru::keygen(kSmall, {}, 7);
  const auto zero = ring::zero_element(64);
  REQUIRE(ntru::encrypt(kp.h, zero, zero, kp.params) == zero);

  Rng rng(8);
  const auto m = ntru::random_ternary(64, rng);
  // Blinding disabled: the ciphertext is just m mod q.
  REQUIRE(ntru::encrypt(kp.h, m, zero, kp.params) == m);

  auto bad = zero;
  bad.coeffs[3] = 2;
  REQUIRE_THROWS_AS(ntru::encrypt(kp.h, bad, zero, kp.params),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(ntru::encrypt(kp.h, zero, bad, kp.params),
                    std::invalid_argument);
}

TEST_CASE("round trip with margin-checked keys") {
  const auto kp = ntru::keygen(kStandard, {}, 11);
  REQUIRE(ntru::decrypt(kp, ntru::encrypt(kp.h, ring::zero_element(256),
                                          ring::zero_element(256), kp.params)) ==
          ring::zero_element(256));
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    const auto m = ntru::random_ternary(256, rng);
    const auto r = ntru::random_ternary(256, rng);
    const auto e = ntru::encrypt(kp.h, m, r, kp.params);
    REQUIRE(ntru::decrypt(kp, e) == m);
    REQUIRE(ntru::decryption_margin(kp, m, r) > 0.0);
  }
}

TEST_CASE("positive margin implies a correct round trip") {
  // Wider keys without the margin check: some margins go negative, and
  // every positive-margin case must still decrypt exactly.
  ntru::KeygenPolicy policy;
  policy.key_sigma = 3.0;
  policy.margin_check = false;
  const auto kp = ntru::keygen(kSmall, policy, 13);
  Rng rng(14);
  int positive = 0;
  for (int t = 0; t < 200; ++t) {
    const auto m = ntru::random_ternary(64, rng);
    const auto r = ntru::random_ternary(64, rng);
    if (ntru::decryption_margin(kp, m, r) > 0.0) {
      ++positive;
      REQUIRE(ntru::decrypt(kp, ntru::encrypt(kp.h, m, r, kp.params)) == m);
    }
  }
  REQUIRE(positive > 0);
}

TEST_CASE("margin of the zero payload is q/2") {
  const auto kp = ntru::keygen(kSmall, {}, 15);
  REQUIRE(ntru::decryption_margin(kp, ring::zero_element(64),
                                  ring::zero_element(64)) ==
          Catch::Approx(1024.0));
}

TEST_CASE("margin shrinks as the key width grows") {
  Rng rng(16);
  std::vector<double> medians;
  for (double sigma : {1.0, 2.0, 4.0}) {
    ntru::KeygenPolicy policy;
    policy.key_sigma = sigma;
    policy.margin_check = false;
    std::vector<double> margins;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const auto kp = ntru::keygen(kSmall, policy, seed);
      const auto m = ntru::random_ternary(64, rng);
      const auto r = ntru::random_ternary(64, rng);
      margins.push_back(ntru::decryption_margin(kp, m, r));
    }
    std::nth_element(margins.begin(), margins.begin() + 25, margins.end());
    medians.push_back(margins[25]);
  }
  REQUIRE(medians[0] > medians[1]);
  REQUIRE(medians[1] > medians[2]);
}

TEST_CASE("oversized keys without the margin check corrupt round trips") {
  ntru::KeygenPolicy policy;
  policy.key_sigma = 20.0;
  policy.margin_check = false;
  const auto kp = ntru::keygen(kSmall, policy, 17);
  Rng rng(18);
  int failures = 0;
  for (int t = 0; t < 50; ++t) {
    const auto m = ntru::random_ternary(64, rng);
    const auto r = ntru::random_ternary(64, rng);
    if (ntru::decrypt(kp, ntru::encrypt(kp.h, m, r, kp.params)) != m)
      ++failures;
  }
  REQUIRE(failures > 0);
}

TEST_CASE("key coefficient variance tracks the policy width") {
  const double sigma = 1.2;
  double sum = 0.0, sumsq = 0.0;
  long long count = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto kp = ntru::keygen(kSmall, {}, seed);
    for (long long c : kp.f.coeffs) {
      sum += static_cast<double>(c);
      sumsq += static_cast<double>(c) * static_cast<double>(c);
      ++count;
    }
  }
  const double mean = sum / static_cast<double>(count);
  const double var = sumsq / static_cast<double>(count) - mean * mean;
  REQUIRE(std::abs(var - sigma * sigma) / (sigma * sigma) < 0.20);
}

TEST_CASE("policy validation") {
  ntru::KeygenPolicy bad;
  bad.key_sigma = 0.0;
  REQUIRE_THROWS_AS(ntru::keygen(kSmall, bad, 1), std::invalid_argument);
  bad.key_sigma = 1.2;
  bad.max_resamples = 0;
  REQUIRE_THROWS_AS(ntru::keygen(kSmall, bad, 1), std::invalid_argument);
}
