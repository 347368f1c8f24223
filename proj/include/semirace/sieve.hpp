#pragma once

// Segmented divide-out sieve classifying integers by Omega(n), the number of
// prime factors counted with multiplicity.

#include <cstdint>
#include <algorithm>
#include <functional>
#include <future>
#include <span>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "semirace/error.hpp"
#include "semirace/parallel.hpp"

namespace semirace {

inline constexpr std::uint64_t kMaxSieveLimit = 1'000'000'000;
inline constexpr std::size_t kDefaultSegmentSize = std::size_t{1} << 22;

enum class OmegaKind : std::uint8_t { kOther = 0, kPrime = 1, kSemiprime = 2 };

struct OmegaClass {
  std::uint64_t n;
  OmegaKind kind;
};

std::uint64_t isqrt(std::uint64_t n);

// All primes <= limit, ascending. Empty for limit < 2.
std::vector<std::uint64_t> base_primes(std::uint64_t limit);

// Omega(n) by trial division. Independent of the sieve; used as a test oracle.
int omega_oracle(std::uint64_t n);

// One window [lo, hi) of the sieve. Residuals fit in 32 bits because the sieve
// is capped at 10^9.
class Segment {
 public:
  Segment(std::uint64_t lo, std::uint64_t hi, bool track_factors = false);

  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }
  std::size_t size() const { return static_cast<std::size_t>(hi_ - lo_); }
  bool tracks_factors() const { return track_factors_; }
  bool classified() const { return classified_; }

  int omega(std::uint64_t n) const { return omega_[n - lo_]; }
  OmegaKind kind(std::uint64_t n) const {
    const int w = omega_[n - lo_];
    return w == 1 ? OmegaKind::kPrime : w == 2 ? OmegaKind::kSemiprime : OmegaKind::kOther;
  }
  std::uint32_t residual(std::uint64_t n) const { return residual_[n - lo_]; }

  // Von Mangoldt Lambda(n) and the convolution (Lambda*Lambda)(n) =
  // sum_{md=n} Lambda(m)Lambda(d). Require track_factors.
  double lambda(std::uint64_t n) const;
  double lambda2(std::uint64_t n) const;

  template <class F>
  void for_each(F&& f) const {
    for (std::uint64_t n = lo_; n < hi_; ++n) f(OmegaClass{n, kind(n)});
  }

 private:
  friend void classify_segment(Segment& seg, std::span<const std::uint64_t> primes);

  std::uint64_t lo_;
  std::uint64_t hi_;
  bool track_factors_;
  bool classified_ = false;
  std::vector<std::uint32_t> residual_;
  std::vector<std::uint8_t> omega_;
  // Only with track_factors: distinct prime count (saturating at 3) and the
  // two smallest distinct primes.
  std::vector<std::uint8_t> distinct_;
  std::vector<std::uint32_t> p1_;
  std::vector<std::uint32_t> p2_;
};

// Fills omega (and factor data) for every n in the segment. `primes` must hold
// every prime <= sqrt(hi - 1); a short list throws InvariantError.
void classify_segment(Segment& seg, std::span<const std::uint64_t> primes);

struct SieveOptions {
  std::size_t segment_size = kDefaultSegmentSize;
  unsigned threads = 0;  // 0: hardware concurrency
  bool track_factors = false;
};

// Classifies [lo, hi) segment by segment. `map(const Segment&)` runs on worker
// threads and must be pure; `reduce(result)` runs on the calling thread in
// ascending segment order. A reduce returning bool stops the sweep on false.
template <class Map, class Reduce>
void sieve_segments(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts, Map&& map,
                    Reduce&& reduce) {
  if (lo < 2) throw UsageError("sieve range must start at n >= 2");
  if (hi > kMaxSieveLimit + 1) throw UsageError("sieve limit above 10^9");
  if (opts.segment_size == 0) throw UsageError("segment size must be positive");
  if (hi <= lo) return;
  const std::vector<std::uint64_t> primes = base_primes(isqrt(hi - 1));
  const unsigned workers = resolve_threads(opts.threads);
  using Result = std::invoke_result_t<Map&, const Segment&>;

  auto run_one = [&](std::uint64_t seg_lo) -> Result {
    const std::uint64_t seg_hi = std::min<std::uint64_t>(hi, seg_lo + opts.segment_size);
    Segment seg(seg_lo, seg_hi, opts.track_factors);
    classify_segment(seg, primes);
    return map(static_cast<const Segment&>(seg));
  };

  auto consume = [&](Result&& r) -> bool {
    if constexpr (std::is_same_v<std::invoke_result_t<Reduce&, Result&&>, bool>) {
      return reduce(std::move(r));
    } else {
      reduce(std::move(r));
      return true;
    }
  };

  std::uint64_t next = lo;
  while (next < hi) {
    if (workers <= 1) {
      if (!consume(run_one(next))) return;
      next = std::min<std::uint64_t>(hi, next + opts.segment_size);
      continue;
    }
    std::vector<std::future<Result>> wave;
    for (unsigned w = 0; w < workers && next < hi; ++w) {
      wave.push_back(std::async(std::launch::async, run_one, next));
      next = std::min<std::uint64_t>(hi, next + opts.segment_size);
    }
    bool keep_going = true;
    for (auto& f : wave) {
      Result r = f.get();
      if (keep_going) keep_going = consume(std::move(r));
    }
    if (!keep_going) return;
  }
}

}  // namespace semirace
