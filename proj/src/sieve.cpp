#include "semirace/sieve.hpp"

#include <cmath>
#include <string>

namespace semirace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint64_t> base_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    primes.push_back(p);
    for (std::uint64_t m = p * p; m <= limit; m += p) composite[m] = true;
  }
  return primes;
}

int omega_oracle(std::uint64_t n) {
  if (n == 0) throw UsageError("omega_oracle: n must be positive");
  int count = 0;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    while (n % d == 0) {
      n /= d;
      ++count;
    }
  }
  if (n > 1) ++count;
  return count;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

Segment::Segment(std::uint64_t lo, std::uint64_t hi, bool track_factors)
    : lo_(lo), hi_(hi), track_factors_(track_factors) {
  if (lo < 2) throw UsageError("segment must start at n >= 2");
  if (hi <= lo) throw UsageError("segment must be non-empty");
  if (hi > kMaxSieveLimit + 1) throw UsageError("segment beyond the 10^9 cap");
}

double Segment::lambda(std::uint64_t n) const {
  if (!track_factors_) throw UsageError("segment was classified without factor tracking");
  const std::size_t i = n - lo_;
  return distinct_[i] == 1 ? std::log(static_cast<double>(p1_[i])) : 0.0;
}

double Segment::lambda2(std::uint64_t n) const {
  if (!track_factors_) throw UsageError("segment was classified without factor tracking");
  const std::size_t i = n - lo_;
  if (distinct_[i] == 1) {
    const double lp = std::log(static_cast<double>(p1_[i]));
    return static_cast<double>(omega_[i] - 1) * lp * lp;
  }
  if (distinct_[i] == 2) {
    return 2.0 * std::log(static_cast<double>(p1_[i])) * std::log(static_cast<double>(p2_[i]));
  }
  return 0.0;
}

namespace {

void check_base_primes(std::span<const std::uint64_t> primes, std::uint64_t hi) {
  const std::uint64_t root = isqrt(hi - 1);
  if (root < 2) return;
  if (primes.empty() || primes.front() != 2) {
    throw InvariantError("base prime list does not cover sqrt(" + std::to_string(hi - 1) + ")");
  }
  const std::uint64_t pmax = primes.back();
  if (pmax >= root) return;
  // Every integer in (pmax, root] must be composite, otherwise a needed prime
  // is missing. Trial division by the list suffices once pmax^2 >= root.
  if (pmax * pmax < root) {
    throw InvariantError("base prime list does not cover sqrt(" + std::to_string(hi - 1) + ")");
  }
  for (std::uint64_t m = pmax + 1; m <= root; ++m) {
    bool has_factor = false;
    for (std::uint64_t p : primes) {
      if (p * p > m) break;
      if (m % p == 0) {
        has_factor = true;
        break;
      }
    }
    if (!has_factor) {
      throw InvariantError("base prime list is missing prime " + std::to_string(m));
    }
  }
}

}  // namespace

void classify_segment(Segment& seg, std::span<const std::uint64_t> primes) {
  const std::uint64_t lo = seg.lo_;
  const std::uint64_t hi = seg.hi_;
  check_base_primes(primes, hi);
  const std::size_t len = seg.size();

  seg.residual_.resize(len);
  seg.omega_.assign(len, 0);
  for (std::size_t i = 0; i < len; ++i) seg.residual_[i] = static_cast<std::uint32_t>(lo + i);
  if (seg.track_factors_) {
    seg.distinct_.assign(len, 0);
    seg.p1_.assign(len, 0);
    seg.p2_.assign(len, 0);
  }

  for (std::uint64_t p : primes) {
    if (p * p > hi - 1) break;
    const auto p32 = static_cast<std::uint32_t>(p);
    // Multiples of p, then of p^2, p^3, ...: each pass removes one factor p.
    for (std::uint64_t pk = p; pk < hi; pk *= p) {
      const bool first_power = pk == p;
      std::uint64_t start = (lo + pk - 1) / pk * pk;
      for (std::uint64_t m = start; m < hi; m += pk) {
        const std::size_t i = m - lo;
        seg.residual_[i] /= p32;
        ++seg.omega_[i];
        if (seg.track_factors_ && first_power) {
          std::uint8_t& d = seg.distinct_[i];
          if (d == 0) {
            seg.p1_[i] = p32;
          } else if (d == 1) {
            seg.p2_[i] = p32;
          }
          if (d < 3) ++d;
        }
      }
      if (pk > (hi - 1) / p) break;
    }
  }

  for (std::size_t i = 0; i < len; ++i) {
    const std::uint32_t r = seg.residual_[i];
    if (r == 1) continue;
    // What remains exceeds every sieving prime's square root bound: one prime.
    ++seg.omega_[i];
    seg.residual_[i] = 1;
    if (seg.track_factors_) {
      std::uint8_t& d = seg.distinct_[i];
      if (d == 0) {
        seg.p1_[i] = r;
      } else if (d == 1) {
        seg.p2_[i] = r;
      }
      if (d < 3) ++d;
    }
  }
  seg.classified_ = true;
}

}  // namespace semirace
