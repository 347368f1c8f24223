#pragma once

// Prime and semiprime race functions in arithmetic progressions.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "semirace/residues.hpp"
#include "semirace/sieve.hpp"

namespace semirace {

// Counts of primes and semiprimes <= x by residue class. Vectors are indexed
// by residue r in [0, q). pi and pi2 are zero off the coprime residues; primes
// and semiprimes sharing a factor with q are tallied in the *_noncoprime
// totals instead. psi/psi2 are empty unless weights were requested.
struct CountVector {
  std::uint64_t x = 0;
  std::vector<std::uint64_t> pi;
  std::vector<std::uint64_t> pi2;
  std::vector<double> psi;   // sum of Lambda(n), n <= x, n = r
  std::vector<double> psi2;  // sum of Lambda(m)Lambda(n), mn <= x, mn = r
  std::uint64_t pi_noncoprime = 0;
  std::uint64_t pi2_noncoprime = 0;

  bool operator==(const CountVector&) const = default;
};

CountVector empty_count_vector(std::uint64_t q, bool weights);

// Per-segment contribution: snapshots at the checkpoints inside the segment,
// taken relative to the segment start, plus the segment total.
struct SegmentPartial {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::vector<CountVector> at_checkpoints;
  CountVector total;
};

// Turns an ordered stream of classified segments into CountVectors at a set of
// checkpoints. `partial` is pure and may run on any thread; `absorb` must see
// the partials in ascending order without gaps.
class RaceAccumulator {
 public:
  RaceAccumulator(std::uint64_t q, std::vector<std::uint64_t> checkpoints, bool weights);
  // Resume from the running totals at start.x; the next segment must begin at
  // start.x + 1.
  RaceAccumulator(std::uint64_t q, std::vector<std::uint64_t> checkpoints, bool weights,
                  CountVector start);

  SegmentPartial partial(const Segment& seg) const;
  void absorb(SegmentPartial&& part);

  std::uint64_t next_n() const { return next_n_; }
  const CountVector& running() const { return running_; }
  const std::vector<CountVector>& results() const { return results_; }

 private:
  std::uint64_t q_;
  std::vector<std::uint64_t> checkpoints_;
  bool weights_;
  std::uint64_t next_n_ = 2;
  CountVector running_;
  std::vector<CountVector> results_;
};

// CountVectors at each (ascending) checkpoint, sieving [2, max checkpoint].
std::vector<CountVector> accumulate(std::uint64_t q, std::span<const std::uint64_t> checkpoints,
                                    const SieveOptions& opts = {});

std::int64_t delta(const CountVector& cv, std::uint64_t a, std::uint64_t b);
std::int64_t delta2(const CountVector& cv, std::uint64_t a, std::uint64_t b);
inline std::int64_t delta(const CountVector& cv, const RaceConfig& cfg) {
  return delta(cv, cfg.a(), cfg.b());
}
inline std::int64_t delta2(const CountVector& cv, const RaceConfig& cfg) {
  return delta2(cv, cfg.a(), cfg.b());
}

struct RaceSample {
  std::uint64_t x;
  std::int64_t delta;
  std::int64_t delta2;
};

struct RaceSeries {
  std::vector<double> grid;
  std::vector<double> delta_norm;   // (log x / sqrt x) Delta
  std::vector<double> delta2_norm;  // (log x / (sqrt x log log x)) Delta2
  std::vector<double> sigma;        // residual of the semiprime decomposition
};

double normalize_delta(double x, double delta);
double normalize_delta2(double x, double delta2);
// delta2_norm - (N(q,b)-N(q,a))/(2 phi(q)) + delta_norm.
double sigma_residual(double delta_norm, double delta2_norm, double semiprime_bias);

RaceSeries normalize(std::span<const RaceSample> samples, const RaceConfig& cfg);

// `points` log-spaced integers from lo to hi inclusive, ascending, duplicates
// removed.
std::vector<std::uint64_t> log_grid(std::uint64_t lo, std::uint64_t hi, std::size_t points);

// Grid used for race plots: 400 points from 10^3 (10 for small limits) to limit.
std::vector<std::uint64_t> default_race_grid(std::uint64_t limit, std::size_t points = 400);

RaceSeries race_series(const RaceConfig& cfg, std::span<const CountVector> counts);

enum class SignEvent { kDeltaNegative, kDelta2Positive };

// Smallest x <= limit with Delta(x;q,a,b) < 0 (resp. Delta2 > 0), scanning
// every integer.
std::optional<std::uint64_t> first_sign_change(const RaceConfig& cfg, SignEvent which,
                                               std::uint64_t limit, const SieveOptions& opts = {});

enum class RaceSignal { kDelta, kDelta2 };

// (1 / log X) * sum over n <= X with signal(n) > 0 of 1/n. a == b is allowed
// and gives 0.
double empirical_log_density(std::uint64_t q, std::uint64_t a, std::uint64_t b, std::uint64_t X,
                             RaceSignal signal, const SieveOptions& opts = {});

}  // namespace semirace
