#include "semirace/race.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace semirace {

namespace {

std::vector<std::uint8_t> coprime_table(std::uint64_t q) {
  std::vector<std::uint8_t> table(q, 0);
  for (std::uint64_t r = 0; r < q; ++r) table[r] = std::gcd(r, q) == 1 ? 1 : 0;
  return table;
}

void add_into(CountVector& dst, const CountVector& src) {
  for (std::size_t r = 0; r < dst.pi.size(); ++r) {
    dst.pi[r] += src.pi[r];
    dst.pi2[r] += src.pi2[r];
  }
  for (std::size_t r = 0; r < dst.psi.size(); ++r) {
    dst.psi[r] += src.psi[r];
    dst.psi2[r] += src.psi2[r];
  }
  dst.pi_noncoprime += src.pi_noncoprime;
  dst.pi2_noncoprime += src.pi2_noncoprime;
}

void check_residues(std::uint64_t q, std::uint64_t a, std::uint64_t b) {
  if (q < 3) throw UsageError("modulus q must be >= 3");
  if (a >= q || b >= q) throw UsageError("residues must be reduced mod q");
  if (std::gcd(a, q) != 1 || std::gcd(b, q) != 1) {
    throw UsageError("residues must be coprime to q");
  }
}

}  // namespace

CountVector empty_count_vector(std::uint64_t q, bool weights) {
  CountVector cv;
  cv.pi.assign(q, 0);
  cv.pi2.assign(q, 0);
  if (weights) {
    cv.psi.assign(q, 0.0);
    cv.psi2.assign(q, 0.0);
  }
  return cv;
}

RaceAccumulator::RaceAccumulator(std::uint64_t q, std::vector<std::uint64_t> checkpoints,
                                 bool weights)
    : RaceAccumulator(q, std::move(checkpoints), weights, [&] {
        CountVector cv = empty_count_vector(q, weights);
        cv.x = 1;
        return cv;
      }()) {}

RaceAccumulator::RaceAccumulator(std::uint64_t q, std::vector<std::uint64_t> checkpoints,
                                 bool weights, CountVector start)
    : q_(q), checkpoints_(std::move(checkpoints)), weights_(weights) {
  if (q < 1) throw UsageError("modulus must be positive");
  if (!std::is_sorted(checkpoints_.begin(), checkpoints_.end()) ||
      std::adjacent_find(checkpoints_.begin(), checkpoints_.end()) != checkpoints_.end()) {
    throw UsageError("checkpoints must be strictly ascending");
  }
  if (start.pi.size() != q || (weights && start.psi.size() != q)) {
    throw DataError("resume counts do not match modulus " + std::to_string(q));
  }
  running_ = std::move(start);
  if (running_.x < 1) running_.x = 1;
  next_n_ = running_.x + 1;
  // Checkpoints below the first sieved integer are already complete.
  for (std::uint64_t c : checkpoints_) {
    if (c < next_n_) {
      if (c < 2) {
        CountVector zero = empty_count_vector(q_, weights_);
        zero.x = c;
        results_.push_back(std::move(zero));
      } else if (c == running_.x) {
        results_.push_back(running_);
      } else {
        throw UsageError("checkpoint " + std::to_string(c) + " precedes the resume point");
      }
    }
  }
}

SegmentPartial RaceAccumulator::partial(const Segment& seg) const {
  if (!seg.classified()) throw InvariantError("segment not classified");
  if (weights_ && !seg.tracks_factors()) {
    throw UsageError("weighted counts need a segment classified with factor tracking");
  }
  static thread_local std::vector<std::uint8_t> coprime;
  static thread_local std::uint64_t coprime_q = 0;
  if (coprime_q != q_) {
    coprime = coprime_table(q_);
    coprime_q = q_;
  }

  SegmentPartial part;
  part.lo = seg.lo();
  part.hi = seg.hi();
  CountVector local = empty_count_vector(q_, weights_);
  auto cp = std::lower_bound(checkpoints_.begin(), checkpoints_.end(), seg.lo());
  std::uint64_t r = seg.lo() % q_;
  for (std::uint64_t n = seg.lo(); n < seg.hi(); ++n) {
    const int w = seg.omega(n);
    if (w == 1) {
      if (coprime[r]) {
        ++local.pi[r];
      } else {
        ++local.pi_noncoprime;
      }
    } else if (w == 2) {
      if (coprime[r]) {
        ++local.pi2[r];
      } else {
        ++local.pi2_noncoprime;
      }
    }
    if (weights_) {
      local.psi[r] += seg.lambda(n);
      local.psi2[r] += seg.lambda2(n);
    }
    if (cp != checkpoints_.end() && *cp == n) {
      local.x = n;
      part.at_checkpoints.push_back(local);
      ++cp;
    }
    if (++r == q_) r = 0;
  }
  local.x = seg.hi() - 1;
  part.total = std::move(local);
  return part;
}

void RaceAccumulator::absorb(SegmentPartial&& part) {
  if (part.lo != next_n_) {
    throw InvariantError("stream gap: expected segment starting at " + std::to_string(next_n_) +
                         ", got " + std::to_string(part.lo));
  }
  for (CountVector& snap : part.at_checkpoints) {
    CountVector cv = running_;
    add_into(cv, snap);
    cv.x = snap.x;
    results_.push_back(std::move(cv));
  }
  add_into(running_, part.total);
  running_.x = part.hi - 1;
  next_n_ = part.hi;
}

std::vector<CountVector> accumulate(std::uint64_t q, std::span<const std::uint64_t> checkpoints,
                                    const SieveOptions& opts) {
  RaceAccumulator acc(q, {checkpoints.begin(), checkpoints.end()}, opts.track_factors);
  if (checkpoints.empty()) return {};
  const std::uint64_t last = checkpoints.back();
  if (last > kMaxSieveLimit) throw UsageError("checkpoint above the 10^9 cap");
  sieve_segments(
      2, last + 1, opts, [&](const Segment& seg) { return acc.partial(seg); },
      [&](SegmentPartial&& p) { acc.absorb(std::move(p)); });
  if (acc.results().size() != checkpoints.size()) {
    throw InvariantError("accumulate produced " + std::to_string(acc.results().size()) +
                         " of " + std::to_string(checkpoints.size()) + " checkpoints");
  }
  return acc.results();
}

std::int64_t delta(const CountVector& cv, std::uint64_t a, std::uint64_t b) {
  if (a >= cv.pi.size() || b >= cv.pi.size()) throw UsageError("residue outside count vector");
  return static_cast<std::int64_t>(cv.pi[a]) - static_cast<std::int64_t>(cv.pi[b]);
}

std::int64_t delta2(const CountVector& cv, std::uint64_t a, std::uint64_t b) {
  if (a >= cv.pi2.size() || b >= cv.pi2.size()) throw UsageError("residue outside count vector");
  return static_cast<std::int64_t>(cv.pi2[a]) - static_cast<std::int64_t>(cv.pi2[b]);
}

double normalize_delta(double x, double d) {
  if (!(x > std::exp(1.0))) throw UsageError("normalization needs x > e");
  return std::log(x) / std::sqrt(x) * d;
}

double normalize_delta2(double x, double d2) {
  if (!(x > std::exp(1.0))) throw UsageError("normalization needs x > e");
  const double lx = std::log(x);
  return lx / (std::sqrt(x) * std::log(lx)) * d2;
}

double sigma_residual(double delta_norm, double delta2_norm, double semiprime_bias) {
  return delta2_norm - semiprime_bias + delta_norm;
}

RaceSeries normalize(std::span<const RaceSample> samples, const RaceConfig& cfg) {
  RaceSeries out;
  const double bias = cfg.semiprime_bias();
  for (const RaceSample& s : samples) {
    const auto x = static_cast<double>(s.x);
    const double dn = normalize_delta(x, static_cast<double>(s.delta));
    const double d2n = normalize_delta2(x, static_cast<double>(s.delta2));
    out.grid.push_back(x);
    out.delta_norm.push_back(dn);
    out.delta2_norm.push_back(d2n);
    out.sigma.push_back(sigma_residual(dn, d2n, bias));
  }
  return out;
}

std::vector<std::uint64_t> log_grid(std::uint64_t lo, std::uint64_t hi, std::size_t points) {
  if (lo == 0 || hi < lo) throw UsageError("log grid needs 0 < lo <= hi");
  if (points == 0) throw UsageError("log grid needs at least one point");
  std::vector<std::uint64_t> grid;
  if (points == 1 || lo == hi) return {hi};
  const double llo = std::log(static_cast<double>(lo));
  const double lhi = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    auto x = static_cast<std::uint64_t>(std::llround(std::exp(llo + t * (lhi - llo))));
    x = std::clamp(x, lo, hi);
    if (i == 0) x = lo;
    if (i + 1 == points) x = hi;
    if (grid.empty() || x > grid.back()) grid.push_back(x);
  }
  return grid;
}

std::vector<std::uint64_t> default_race_grid(std::uint64_t limit, std::size_t points) {
  if (limit < 3) throw UsageError("race limit must be at least 3");
  const std::uint64_t lo = limit >= 1000 ? 1000 : std::min<std::uint64_t>(10, limit);
  return log_grid(lo, limit, points);
}

RaceSeries race_series(const RaceConfig& cfg, std::span<const CountVector> counts) {
  std::vector<RaceSample> samples;
  samples.reserve(counts.size());
  for (const CountVector& cv : counts) {
    samples.push_back({cv.x, delta(cv, cfg), delta2(cv, cfg)});
  }
  return normalize(samples, cfg);
}

namespace {

// Local running difference within one segment, for the omega class of the
// chosen signal.
template <class OnStep>
std::int64_t scan_difference(const Segment& seg, std::uint64_t q, std::uint64_t a, std::uint64_t b,
                             int omega, OnStep&& on_step) {
  std::int64_t d = 0;
  std::uint64_t r = seg.lo() % q;
  for (std::uint64_t n = seg.lo(); n < seg.hi(); ++n) {
    if (seg.omega(n) == omega) {
      if (r == a) ++d;
      if (r == b) --d;
    }
    on_step(n, d);
    if (++r == q) r = 0;
  }
  return d;
}

struct RecordPartial {
  std::int64_t total = 0;
  // (n, s*d(n)) at every strict new maximum of s*d within the segment.
  std::vector<std::pair<std::uint64_t, std::int64_t>> records;
};

struct HistogramPartial {
  std::int64_t total = 0;
  std::map<std::int64_t, double> reciprocal_sum;  // local d(n) -> sum of 1/n
};

}  // namespace

std::optional<std::uint64_t> first_sign_change(const RaceConfig& cfg, SignEvent which,
                                               std::uint64_t limit, const SieveOptions& opts) {
  if (limit > kMaxSieveLimit) throw UsageError("limit above the 10^9 cap");
  if (limit < 2) return std::nullopt;
  const int omega = which == SignEvent::kDeltaNegative ? 1 : 2;
  const std::int64_t sign = which == SignEvent::kDeltaNegative ? -1 : 1;
  SieveOptions sopts = opts;
  sopts.track_factors = false;

  std::int64_t base = 0;
  std::optional<std::uint64_t> found;
  sieve_segments(
      2, limit + 1, sopts,
      [&](const Segment& seg) {
        RecordPartial part;
        bool any = false;
        std::int64_t best = 0;
        part.total = scan_difference(seg, cfg.q(), cfg.a(), cfg.b(), omega,
                                     [&](std::uint64_t n, std::int64_t d) {
                                       const std::int64_t v = sign * d;
                                       if (!any || v > best) {
                                         part.records.emplace_back(n, v);
                                         best = v;
                                         any = true;
                                       }
                                     });
        return part;
      },
      [&](RecordPartial&& part) {
        const std::int64_t need = -sign * base;  // first n with s*d(n) > need
        for (const auto& [n, v] : part.records) {
          if (v > need) {
            found = n;
            return false;
          }
        }
        base += part.total;
        return true;
      });
  return found;
}

double empirical_log_density(std::uint64_t q, std::uint64_t a, std::uint64_t b, std::uint64_t X,
                             RaceSignal signal, const SieveOptions& opts) {
  check_residues(q, a, b);
  if (X < 10) throw UsageError("empirical log density needs X >= 10");
  if (X > kMaxSieveLimit) throw UsageError("X above the 10^9 cap");
  const int omega = signal == RaceSignal::kDelta ? 1 : 2;
  SieveOptions sopts = opts;
  sopts.track_factors = false;

  std::int64_t base = 0;
  double sum = 0.0;
  sieve_segments(
      2, X + 1, sopts,
      [&](const Segment& seg) {
        HistogramPartial part;
        part.total = scan_difference(seg, q, a, b, omega, [&](std::uint64_t n, std::int64_t d) {
          part.reciprocal_sum[d] += 1.0 / static_cast<double>(n);
        });
        return part;
      },
      [&](HistogramPartial&& part) {
        for (const auto& [d, w] : part.reciprocal_sum) {
          if (base + d > 0) sum += w;
        }
        base += part.total;
      });
  return sum / std::log(static_cast<double>(X));
}

}  // namespace semirace
