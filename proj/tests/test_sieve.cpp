#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"
#include "semirace/error.hpp"
#include "semirace/race.hpp"
#include "semirace/sieve.hpp"

using namespace semirace;

TEST_CASE("base_primes") {
  CHECK(base_primes(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(base_primes(2) == std::vector<std::uint64_t>{2});
  CHECK(base_primes(1).empty());
  CHECK(base_primes(0).empty());
  const auto p = base_primes(1'000'000);
  CHECK(p.size() == 78498);
  CHECK(std::is_sorted(p.begin(), p.end()));
  // independent count by trial division
  std::size_t count = 0;
  for (std::uint64_t n = 2; n <= 1'000'000; ++n) count += oracle::is_prime(n);
  CHECK(count == p.size());
}

TEST_CASE("omega_oracle") {
  CHECK(omega_oracle(1) == 0);
  CHECK(omega_oracle(49) == 2);
  CHECK(omega_oracle(210) == 4);
  CHECK(omega_oracle(1024) == 10);
  CHECK(omega_oracle(999999937) == 1);
  CHECK_THROWS_AS(omega_oracle(0), UsageError);
}

TEST_CASE("classification matches the oracle up to 10^6") {
  const std::uint64_t hi = 1'000'001;
  const auto primes = base_primes(isqrt(hi - 1));
  std::uint64_t mismatches = 0;
  for (std::uint64_t lo = 2; lo < hi; lo += 65536) {
    Segment seg(lo, std::min(hi, lo + 65536));
    classify_segment(seg, primes);
    for (std::uint64_t n = seg.lo(); n < seg.hi(); ++n) {
      if (seg.omega(n) != omega_oracle(n)) ++mismatches;
      if (seg.residual(n) != 1) ++mismatches;
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("small segment examples") {
  Segment seg(2, 100);
  classify_segment(seg, base_primes(9));
  CHECK(seg.kind(9) == OmegaKind::kSemiprime);
  CHECK(seg.kind(12) == OmegaKind::kOther);
  CHECK(seg.kind(97) == OmegaKind::kPrime);
  int semiprimes = 0;
  seg.for_each([&](OmegaClass c) { semiprimes += c.kind == OmegaKind::kSemiprime; });
  CHECK(semiprimes == 34);
}

TEST_CASE("factor tracking gives Lambda and Lambda*Lambda") {
  Segment seg(2, 5000, true);
  classify_segment(seg, base_primes(isqrt(4999)));
  std::vector<double> lam(5000);
  for (std::uint64_t n = 1; n < 5000; ++n) lam[n] = oracle::von_mangoldt(n);
  for (std::uint64_t n = 2; n < 5000; ++n) {
    CHECK(seg.lambda(n) == doctest::Approx(lam[n]).epsilon(1e-12));
    double conv = 0.0;
    for (std::uint64_t d = 1; d <= n; ++d) {
      if (n % d == 0) conv += lam[d] * lam[n / d];
    }
    CHECK(seg.lambda2(n) == doctest::Approx(conv).epsilon(1e-12));
  }
}

TEST_CASE("insufficient base primes are a hard error") {
  Segment seg(10'000, 20'000);
  CHECK_THROWS_AS(classify_segment(seg, base_primes(50)), InvariantError);
  Segment ok(10'000, 20'000);
  CHECK_NOTHROW(classify_segment(ok, base_primes(isqrt(19'999))));
}

TEST_CASE("segment size does not change the result") {
  const std::vector<std::uint64_t> checkpoints{1'000, 77'777, 500'000, 1'000'000};
  SieveOptions big;
  SieveOptions small;
  small.segment_size = 997;
  SieveOptions threaded;
  threaded.segment_size = 4096;
  threaded.threads = 3;
  const auto a = accumulate(12, checkpoints, big);
  CHECK(a == accumulate(12, checkpoints, small));
  CHECK(a == accumulate(12, checkpoints, threaded));
}

TEST_CASE("prime counts per residue sum to the segment total") {
  Segment seg(1'000, 50'000);
  classify_segment(seg, base_primes(isqrt(49'999)));
  std::vector<int> by_residue(7, 0);
  int total = 0;
  seg.for_each([&](OmegaClass c) {
    if (c.kind == OmegaKind::kPrime) {
      ++by_residue[c.n % 7];
      ++total;
    }
  });
  int sum = 0;
  for (int v : by_residue) sum += v;
  CHECK(sum == total);
}

TEST_CASE("sieve range limits") {
  auto noop = [](const Segment&) { return 0; };
  auto sink = [](int) {};
  CHECK_THROWS_AS(sieve_segments(1, 100, SieveOptions{}, noop, sink), UsageError);
  CHECK_THROWS_AS(sieve_segments(2, kMaxSieveLimit + 2, SieveOptions{}, noop, sink), UsageError);
}
